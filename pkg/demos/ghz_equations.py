"""
GHZ: four sign equations no classical assignment can satisfy
============================================================

Three qubits in the GHZ state, measured with signed tensor products of
X and Y.  The state makes four joint outcomes certain:

    XXX = 0     XYY = YXY = YYX = 1

Multiplying the last three operators gives -XXX, so any global
assignment would need XXX to be both 0 and 1.  The model's support
theory entails all four equations exactly.
"""

from contextuality.avn import LinearEquation, entails, is_avn, theory_of
from contextuality.fixtures import get_fixture
from contextuality.scenario import classify

bundle = get_fixture("ghz")
model = bundle.model
scenario = model.scenario

print(f"model: {len(scenario.measurements)} sign operators in "
      f"{len(scenario.contexts)} contexts (commuting-product closure "
      "of the signed X/Y grid on the GHZ state)")

verdict = classify(model)
print("possibilistic class:", verdict)

# the four certain outcomes, phrased as one-variable equations
wanted = [("+XXX", 0), ("+XYY", 1), ("+YXY", 1), ("+YYX", 1)]
theory = theory_of(model)
print(f"\ntheory: {len(theory.equations)} parity equations over "
      f"{len(scenario.measurements)} variables")
for label, value in wanted:
    eq = LinearEquation(((label, 1),), value)
    print(f"  entails {label} = {value}:", entails(theory, eq))

# the context holding all four signed X/Y products admits exactly one
# section, and that section realises the values above
target = next(i for i, ctx in enumerate(scenario.contexts)
              if all(x in ctx for x, _ in wanted))
sections = model.sections[target]
print(f"\ncontext {target} contains all four operators and admits "
      f"{len(sections)} section(s):")
for x, value in wanted:
    print(f"  section assigns {x} -> {sections[0][x]} (forced {value})")

report = is_avn(model)
print(f"\nAvN = {report.avn}: the stacked theory refutes every global "
      "assignment")
