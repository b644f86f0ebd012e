"""The type D quiver series and its integer-plus-thirds spectra.

Dynkin quivers of type D with the dimension vector of the longest root
give a series of linear free divisors whose spectra decompose into one
integer block flanked by two blocks of third-integers.  The m = 5
member (n = 10) is comfortable on a laptop; m = 6 is the first genuinely
large one and lives behind the extended regression row instead.

Run:  python3 demos/dynkin_series.py   (about ten seconds)
"""

from lfdspectrum import analyze, analyze_divisor, family, random_finite_f
from lfdspectrum.catalog import dynkin_d_quiver
from lfdspectrum.rational import rat

q = dynkin_d_quiver(5)
print("D5 quiver nodes:", q.nodes)
print("dims:", q.dims, "-> rep dimension", q.rep_dimension())

d = analyze_divisor(family("dynkinD:5"))
print("n =", d.n, "| h has", len(d.h.terms), "terms")
print("special:", d.special, "| reductive:", d.reductive)

f = random_finite_f(d, seed=0)
print("seeded section found on attempt", f.attempts)

res = analyze(d, f.section)
spectrum = res.spectrum.spectrum_generic
print("spectrum:", [str(v) for v in spectrum])
print("sum:", str(sum(spectrum, rat(0))), "= n(n-1)/2 =", d.n * (d.n - 1) // 2)

# the three blocks: thirds starting at (4m-10)/3, integers from m-3,
# thirds starting at (5m-11)/3; at m = 5 that reads 10/3.., 2..7, 14/3..
mid = rat("9/2")
thirds_lo = [v for v in spectrum if v.denominator == 3 and v < mid]
integers = [v for v in spectrum if v.denominator == 1]
thirds_hi = [v for v in spectrum if v.denominator == 3 and v > mid]
print("third-integer block low: ", [str(v) for v in thirds_lo])
print("integer block:           ", [str(v) for v in integers])
print("third-integer block high:", [str(v) for v in thirds_hi])

assert [str(v) for v in thirds_lo] == ["10/3", "13/3"]
assert [str(v) for v in integers] == ["2", "3", "4", "5", "6", "7"]
assert [str(v) for v in thirds_hi] == ["14/3", "17/3"]
assert res.conjectures.extra_symmetry and res.conjectures.residues_symmetric

print()
print("residues:", [str(v) for v in sorted(res.conjectures.residues)])
print("the same thirds structure appears in the residues, shifted to 0")
