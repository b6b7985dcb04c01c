"""The four analytic bounds on a small constellation.

Computes the finite-constellation sphere bounds (mslb/msub) and their
infinite-lattice counterparts (slb/sub) for Z2 carved to 4-PAM, prints
them against the exact error probability, and demonstrates two
characteristic behaviors:

* the infinite-lattice lower bound overshoots the true error rate of a
  small constellation at low SNR, while the finite-constellation bound
  stays below it everywhere;
* as the carving gets denser (K grows) the finite-constellation bounds
  converge onto the infinite-lattice ones.
"""

from latticesep import (
    FiniteConstellation,
    JSource,
    SnrGrid,
    catalog_lattice,
    exact_sep_theorem1,
    mslb,
    msub,
    slb,
    sub,
)

lattice = catalog_lattice("Z2")
c = FiniteConstellation(lattice=lattice, K=4)
grid = SnrGrid.from_db(0.0, 20.0, 2.0)

exact = [est.mean for est in exact_sep_theorem1(c, grid, JSource.ANALYTIC_ZN)]
lower = mslb(c, grid).values
upper = msub(c, grid).values
lower_inf = slb(lattice, grid).values
upper_inf = sub(lattice, grid).values

print("Z2, 4-PAM (16 points)")
print("snr_db      mslb       exact      msub   |    slb        sub")
for i, db in enumerate(grid.db):
    flag = "  <- slb above the true SEP" if lower_inf[i] > exact[i] else ""
    print(
        f"{db:5.1f}   {lower[i]:.3e}  {exact[i]:.3e}  {upper[i]:.3e} | "
        f"{lower_inf[i]:.3e}  {upper_inf[i]:.3e}{flag}"
    )

# The finite-constellation bounds sandwich the exact curve at every point.
ok = all(lower[i] <= exact[i] <= upper[i] for i in range(len(grid)))
print("\nmslb <= exact <= msub at all grid points:", ok)

# Densify the carving: the gap to the infinite-lattice bounds collapses.
point = SnrGrid.from_db_values([14.0])
slb_value = slb(lattice, point).values[0]
print("\nK      mslb(K) - slb   (at 14 dB)")
for big_k in (4, 8, 32, 128, 512):
    ck = FiniteConstellation(lattice=lattice, K=big_k)
    print(f"{big_k:<5d}  {mslb(ck, point).values[0] - slb_value:+.3e}")
