"""Sample a random polynomial, count its real roots two ways, compare with the Kac average."""
from kaclab import Interval, count_roots, descartes_count, expected_count, sample_polynomial, sturm_count

p = sample_polynomial("gaussian", 48, master_seed=2024, trial_index=0)
for spec in ("(-inf,inf)", "[-1,1]", "[0,1]"):
    I = Interval.parse(spec)
    print(f"{spec:>11}: sturm={sturm_count(p, I).count} descartes={descartes_count(p, I).count} "
          f"E[N]={expected_count(48, I):.3f}")

big = sample_polynomial("rademacher", 4096, master_seed=2024, trial_index=0)
res = count_roots(big, Interval.real_line())
print(f"degree 4096 Rademacher: {res.count} real roots via {res.method}; E[N] (Gaussian) = {expected_count(4096):.3f}")
