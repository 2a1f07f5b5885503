import math

# Initialization
THETA_MIN_DEG = 10.0
ZERO_MOTION_FACTOR = 1e-4      # ZeroMotion when |t| < factor * enclosing radius
ALL_PAIRS_LIMIT = 64           # brute-force pair search up to this many frames

# Screw algebra
ANGLE_EPSILON = 1e-7           # rad, pure-translation branch of screw_decompose
NEAR_PI_EPSILON = 1e-6         # rad, sign tie-break zone for rotation axes
DIRECTION_RAW_MIN_NORM = 1e-8

# Optimization schedule and judgment
TOTAL_ITERS = 7500
ITER_JUDGE = 2000
ALPHA_MIN_FACTOR = 0.1         # alpha_min = factor * enclosing radius of the part
PHI_MIN = 0.05 * math.pi
LAMBDA_MOTION = 10.0
LAMBDA_ALIGN_UNCORRESPONDED = 1.0
AXIS_WARMUP_ITERS = 200
JUDGE_WINDOW = 200            # iterations whose per-frame deltas are averaged for judgment

# Adam
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8
LR_DIRECTION = 1e-3
LR_POSITION = 1e-3
LR_DELTA = 1e-2
LR_FINAL_RATIO = 0.01

DEFAULT_SEED = 0
LOG_EVERY = 500

# ICP fallback
ICP_MAX_ITERS = 50
ICP_TOL = 1e-9

# Evaluation
IOU_NN_FACTOR = 0.01           # nearest-neighbour match radius as a fraction of scene diameter
