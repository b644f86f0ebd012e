"""Bringing your own divisor: files in, reports out.

Any n matrices whose fields close under bracket and cut out a reduced
degree-n determinant define a linear free divisor the tools accept.
This demo writes such a presentation to a JSON file, reads it back the
way the command line does, analyzes it, and shows what happens when a
section fails the finiteness test or a matrix is corrupted.

Run:  python3 demos/custom_divisor.py
"""

import json
import tempfile
from pathlib import Path

from lfdspectrum import (
    LinearSection,
    analyze,
    build_report,
    presentation_from_json,
)
from lfdspectrum.divisor import analyze_divisor, presentation_to_json
from lfdspectrum.errors import NotFinite, NotSemiInvariant
from lfdspectrum.linalg import RationalMatrix
from lfdspectrum.poly import emit

# the 2x2 symmetric-matrix divisor, entered as raw matrices: the
# congruence action of the three upper-triangular units on (s11,s12,s22)
A1 = RationalMatrix([[2, 0, 0], [0, 1, 0], [0, 0, 0]])
A2 = RationalMatrix([[0, 0, 0], [1, 0, 0], [0, 2, 0]])
A3 = RationalMatrix([[0, 0, 0], [0, 1, 0], [0, 0, 2]])

record = {
    "name": "sym2 by hand",
    "n": 3,
    "lie_basis": [[[str(v) for v in row] for row in a.entries] for a in (A1, A2, A3)],
}

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "divisor.json"
    path.write_text(json.dumps(record, indent=2))
    print("wrote", path.name, "- the same format `lfdspectrum analyze --input` reads")

    loaded = presentation_from_json(json.loads(path.read_text()))
    d = analyze_divisor(loaded)
    print("h =", emit(d.h))

    f = LinearSection((1, 0, 1))
    report = build_report(analyze(d, f), {"input_file": path.name, "f": "manual"})
    print("spectrum:", report["spectrum"]["spectrum_generic"])
    assert report["spectrum"]["spectrum_generic"] == ["3/4", "1", "5/4"]

# a section on the dual divisor is rejected up front, not deep inside
print()
try:
    analyze(d, LinearSection((0, 1, 0)))
except NotFinite as exc:
    print("degenerate section is refused:", exc)

# and a corrupted matrix fails the semi-invariance check
bad = presentation_to_json(loaded)
bad["lie_basis"][0][0][1] = "1"
try:
    analyze_divisor(presentation_from_json(bad))
except NotSemiInvariant as exc:
    print("corrupted matrix is refused: ", exc)
