"""
The Mermin square: strong contextuality from nine two-qubit observables
=======================================================================

Nine sign operators arranged three-by-three so that each row and each
column commutes.  Five of the six lines multiply to +II, the last
column to -II.  No assignment of outcomes to all nine observables can
respect every product, and the support of the quantum model remembers
this.
"""

from contextuality.avn import is_avn, theory_of
from contextuality.fixtures import MERMIN_GENERATORS, get_fixture
from contextuality.scenario import classify

bundle = get_fixture("mermin")
model = bundle.model
scenario = model.scenario

print("generators:", ", ".join(MERMIN_GENERATORS))
print(f"closure: {len(scenario.measurements)} sign operators, "
      f"{len(scenario.contexts)} maximal contexts")
for i, ctx in enumerate(scenario.contexts):
    line = [x for x in ctx if x[0] == "+" and x != "+II"]
    print(f"  context {i}: {' '.join(line)}  "
          f"({len(model.sections[i])} admissible sections)")

# every context is fine on its own; the verdict is global
verdict = classify(model)
print("\npossibilistic class:", verdict)

# the supports force one parity equation per line; stacked together
# they are unsatisfiable over Z2, which is the All-vs-Nothing pattern
report = is_avn(model)
theory = theory_of(model)
print(f"theory: {len(theory.equations)} parity equations, "
      f"AvN = {report.avn}")

# the refuting combination is explicit: sum these six equations and
# every observable appears twice while the constants sum to 1
y = report.certificate.certificate
chosen = [eq for yi, eq in zip(y, theory.equations) if yi % 2]
print(f"refutation combines {len(chosen)} equations:")
for eq in chosen:
    lhs = " + ".join(x for x, _ in eq.coeffs)
    print(f"  {lhs} = {eq.constant}")
const = sum(eq.constant for eq in chosen) % 2
print(f"left sides cancel pairwise, right sides add to {const}: "
      "no global assignment exists")
