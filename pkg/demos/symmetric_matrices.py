"""Symmetric matrices under congruence: a non-reductive example.

GL(k) acts on symmetric k x k matrices by S -> tB S B; the generic
orbit is dense and the complement is the product of the leading
principal minors.  This family is NOT special and NOT reductive, which
exercises the code paths the nicer examples never touch: c_n can be
nonzero, the Birkhoff solver runs in its general mode, and the
t-direction matrix is emitted with an explicit caveat.

The k = 2 case is small enough to read every intermediate object.

Run:  python3 demos/symmetric_matrices.py
"""

from lfdspectrum import analyze, analyze_divisor, canonical_f, family
from lfdspectrum.poly import emit

d = analyze_divisor(family("sym:2"))
print("coordinates: s11, s12, s22")
print("h =", emit(d.h), " (s11 times the determinant)")
print("h_dual =", emit(d.h_dual))
print("special:", d.special, "| reductive:", d.reductive)

f = canonical_f("sym:2")  # the trace section s11 + s22
print("f =", emit(f.poly()))

res = analyze(d, f)

print()
print("connection coefficients (c0 normalized to 1):")
print("  c =", [str(c) for c in res.cc.c], " t rescaled by", str(res.cc.t_scale))
print("  c3 is nonzero exactly because the divisor is not special"
      if res.cc.c[3] else "  c3 = 0 here")

print()
print("Birkhoff solution:")
for entry in res.birkhoff.root_log:
    print(f"  level {entry['level']}: {entry['unknown']} from {entry['poly']},"
          f" roots {entry['roots']}, chose {entry['chosen']}")
print("  b table:", {f"b{i}^{j}": str(v) for (i, j), v in sorted(res.birkhoff.b.items())})

print()
print("nu1 =", [str(v) for v in res.spectrum.nu1])
print("one exchange move sorts it into the V+ range:")
print("nu2 =", [str(v) for v in res.spectrum.nu2])
print("spectrum =", [str(v) for v in res.spectrum.spectrum_generic])
print("residues =", [str(v) for v in res.conjectures.residues])
print("warning on the t-direction matrix:")
print(" ", res.t_connection.warning)

assert [str(v) for v in res.spectrum.spectrum_generic] == ["3/4", "1", "5/4"]
assert res.t_connection.warning is not None

# the larger instances run through the same pipeline; k = 3 takes
# about a second with a seeded random section
from lfdspectrum import random_finite_f

d3 = analyze_divisor(family("sym:3"))
f3 = random_finite_f(d3, seed=0)
res3 = analyze(d3, f3.section)
print()
print("sym:3 with a seeded random section (attempt", f3.attempts, "):")
print("spectrum =", [str(v) for v in res3.spectrum.spectrum_generic])
assert [str(v) for v in res3.spectrum.spectrum_generic] == ["2", "2", "5/2", "5/2", "3", "3"]
