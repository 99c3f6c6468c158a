"""Hand-derived values for set 1 at theta2 = pi/2.

U21|C> = (r, 0, r) with r = sqrt(2)/2, and U32 maps it to (0, -1, 0).
Pass-A branch (r,0,0) -> (-1/2, -1/2, 0); pass-C branch (0,0,r) -> (1/2, -1/2, 0).
Ambiguous columns are indexed by the blocked mode (A, B, C).
"""

import math

SET1_PI = (0.0, 0.25, 0.0, 0.5, 0.75, 0.0)
SET1_HALF_PI = tuple(a * math.pi for a in SET1_PI)

MID_STATE = (math.sqrt(0.5), 0.0, math.sqrt(0.5))
FINAL_STATE = (0.0, -1.0, 0.0)

MARGINALS = (0.0, 1.0, 0.0)

# rows n3 = A, B, C; columns n2 = A, B, C
JOINT_U = (
    (0.25, 0.0, 0.25),
    (0.25, 0.0, 0.25),
    (0.0, 0.0, 0.0),
)

# columns: block A (B u C), block B (A u C), block C (A u B)
JOINT_A = (
    (0.25, 0.0, 0.25),
    (0.25, 1.0, 0.25),
    (0.0, 0.0, 0.0),
)

QUASI = (
    (0.0, 0.25, 0.0),
    (0.5, -0.25, 0.5),
    (0.0, 0.0, 0.0),
)

Q2_MEAN_A = 1.0
Q3Q2_MEAN_A = -1.5
Q3_MEAN = -1.0
K = 2.0
DELTA = (-0.5, 0.5, 0.0)
BIG_DELTA = 1.0
K_A = 0.5
DELTA_A = (-0.25, 0.25, 0.0)
BIG_DELTA_A = 0.5
