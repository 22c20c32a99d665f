"""
The four two-bit gates
======================

RDN copies one bit to everything, UNQ hands each source its own bit, XOR
hides the message in the parity and AND mixes a little of everything.  Both
definitions are solved exactly by walking every vertex of the channel
polytope.
"""

from markov_pid import Definition, canonical_example, decompose_discrete

print(f"{'gate':5} {'def':5} {'UI_X':>8} {'UI_Y':>8} {'R':>8} {'S':>8}")
for name in ("RDN", "UNQ", "XOR", "AND"):
    joint = canonical_example(name)
    for d in Definition:
        dec = decompose_discrete(joint, d)
        ui_x, ui_y, r, s = dec.terms.table_row()
        print(f"{name:5} {d.value:5} {ui_x:8.4f} {ui_y:8.4f} {r:8.4f} {s:8.4f}")

# In AND the two inputs are independent, so under the source-side
# definition T = X itself is a feasible extractor and everything X knows
# about M counts as unique.
dec = decompose_discrete(canonical_example("AND"), "myxt")
print("\nAND, myxt: optimal channel p(t|x) =")
print(dec.ui_x.optimal_channel.probs)
