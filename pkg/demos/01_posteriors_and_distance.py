"""What the observer believes, and how much a mask can bend that belief.

Builds a five-sensor network by hand, then walks through the three posterior
views (full observation, hidden outcomes, flipped outcomes) and the expected
Lp distance between belief vectors.
"""

import math

import numpy as np

from halftruth import (
    DbnModel,
    Mask,
    Stage1Node,
    additive,
    disagreement,
    flipped_posterior,
    linear,
    lkm_distance,
    masked_posterior,
    true_posterior,
    validate_model,
)

# Five stage-0 sensors with different base rates; three stage-1 outcomes:
#   node 0: fires with probability proportional to how many of sensors 0-2 are up
#   node 1: weighted vote of sensors 1, 3, 4
#   node 2: needs both sensors 3 and 4
model = DbnModel(
    n0=5,
    priors=[0.1, 0.3, 0.5, 0.7, 0.9],
    nodes=[
        Stage1Node([0, 1, 2], additive([0.0, 0.2, 0.6, 0.95])),
        Stage1Node([1, 3, 4], linear([0.5, 0.3, 0.2])),
        Stage1Node([3, 4], additive([0.0, 0.1, 1.0])),
    ],
)
validate_model(model)

x0 = (1, 0, 1, 1, 0)
print("realization:", x0)

q = true_posterior(model, x0)
print("\nfull observation -> stage-1 beliefs:", np.round(q, 4))

mask = Mask([0, 4], "hide")
r_hide = masked_posterior(model, x0, mask)
print(f"hide sensors {mask.indices}     -> beliefs:", np.round(r_hide, 4))
print("  (hidden sensors are marginalized with their priors: the observer")
print("   does not know anything was removed)")

flip = Mask([0, 4], "flip")
r_flip = flipped_posterior(model, x0, flip)
print(f"flip sensors {flip.indices}     -> beliefs:", np.round(r_flip, 4))
print("  (an outright lie: the observer sees a complete falsified vector)")

d = disagreement(q, r_hide)
print("\nper-node disagreement probability q + r - 2qr:", np.round(d, 4))
for p in (1, 2, math.inf):
    label = "inf" if p == math.inf else p
    print(f"  expected L{label} distance between belief draws: {lkm_distance(d, p):.4f}")

d_flip = disagreement(q, r_flip)
print("\nsame distances for the flipped view:")
for p in (1, 2, math.inf):
    label = "inf" if p == math.inf else p
    print(f"  expected L{label} distance: {lkm_distance(d_flip, p):.4f}")

print("\nNote the hiding attack already moves the beliefs a good fraction of")
print("what outright flipping achieves, without ever reporting a false value.")
