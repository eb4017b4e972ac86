"""
Hardy's model: a contextual section the cohomology cannot see
=============================================================

The Hardy support is logically contextual: one of its thirteen local
sections extends to no global assignment.  Yet the first-cohomology
class of that section vanishes, because the obstruction lives in a
linearized world where sections may carry negative integer weights.
The vanishing certificate is such a family; collapsing it shows the
weights conspire to imitate a global section that is not in the
support.
"""

from contextuality.cech import cech_obstruction_vanishes, collapse_family
from contextuality.fixtures import get_fixture
from contextuality.scenario import classify, section_extends

model = get_fixture("hardy").model
scenario = model.scenario

print("contexts and admissible sections:")
for i, ctx in enumerate(scenario.contexts):
    secs = ["".join(str(v) for _, v in s.items) for s in model.sections[i]]
    print(f"  {i}: ({', '.join(ctx)})  supports {' '.join(secs)}")

verdict = classify(model)
print("\npossibilistic class:", verdict)
ci, sec = verdict.witnesses[0]
print(f"witness: context {ci}, section {dict(sec.items)}")
print("extends to a global assignment:", section_extends(model, ci, sec))

# the cohomological test says "no obstruction" anyway
decision = cech_obstruction_vanishes(model, ci, sec)
print("\nCech class vanishes:", decision.vanishes)
print("compatible integer family behind the verdict:")
for (cj, s), coeff in sorted(decision.family.items()):
    print(f"  context {cj}: {coeff:+d} * {dict(s.items)}")

# merging the family weight-by-weight produces a single assignment,
# but not one the model allows: the telltale negative coefficient
# cancelled a forbidden section instead of avoiding it
merged = collapse_family(model, decision.family)
print("\ncollapsed outcome map:", merged)
for j, ctx in enumerate(scenario.contexts):
    restricted = {x: merged[x] for x in ctx}
    ok = any(dict(s.items) == restricted for s in model.sections[j])
    print(f"  restricts into context {j}'s support: {ok}")
print("a genuine global section would need every line above to be True")
