"""Recover the triple eigenvalue 7 of a Brunet-style test matrix from
perturbation spectra, and write the matrix to brunet_analog.csv so the
CLI can be pointed at it:

    python3 demos/jordan_brunet.py
    salmine mine-jordan --matrix brunet_analog.csv --region 7+0i:0.5 --output out/jordan
"""
from salmine.eigen import eigenvalues, jordan_test_matrix, write_matrix_csv
from salmine.jordan import FIXTURES, Region, mine_jordan

structure = FIXTURES["brunet-analog"][0]
a = jordan_test_matrix(structure, seed=0)
write_matrix_csv("brunet_analog.csv", a)

# Rounding alone already splits the triple eigenvalue.
print("unperturbed eigenvalues near 7:",
      [complex(round(z.real, 6), round(z.imag, 6)) for z in eigenvalues(a) if abs(z - 7) < 0.5])

report = mine_jordan(a, Region(7, 0.5), tol=0.1, seed=0)
top = report.top_model
print(f"{report.status} after {report.rounds_used} round(s): "
      f"lambda = {top.center:.6f}, block size {top.multiplicity}, "
      f"p = {report.top_probability:.3f}")
for model, p in report.posterior.ranked():
    print(f"  rho={model.multiplicity}  center={model.center:.4f}  p={p:.3f}")
