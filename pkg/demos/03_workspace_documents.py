"""Drive the verifiers from a workspace document, as the CLI does."""

from mflef import parse_document, serialize_document
from mflef.cli import run_command

TEXT = """
[potential]
w = x^3

[symmetry]
name = t
potential = w
roots = zeta(3)^[1]

[mf]
name = A
potential = w
d0 = { x }
d1 = { x^2 }

[morphism]
name = alpha
source = A
target = A
twist = t
twisted = target
parity = even
mat = {
1 ; 0
0 ; zeta(3)
}

[morphism]
name = beta
source = A
target = A
twist = t
twisted = source
parity = even
mat = {
1 ; 0
0 ; zeta(3)^2
}

[case]
name = demo
command = hlf-verify
args = A A t alpha beta
"""

doc = parse_document(TEXT)
print("entities:", sorted(doc.potentials), sorted(doc.factorizations), sorted(doc.morphisms))

lines, reports, ok = run_command("corpus", [], doc)
for line in lines:
    print(line)
print("round-trip stable:", parse_document(serialize_document(doc)) == doc)
