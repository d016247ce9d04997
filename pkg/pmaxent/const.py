"""Constants shared across pmaxent.

Column layouts, suite names, exit codes and grid defaults used by the
library, the verification harness and the command line.
"""

# FlowCurve CSV columns, in emission order
CURVE_COLS = ['alpha', 'H', 'Lambda', 'D', 'dLambda', 'dD', 'd2Lambda', 'd2D', 'heat_residual']

# Accumulation CSV columns
ACCUMULATE_COLS = ['n', 'tv']

# Verification suites, in the order ``all`` runs them
SUITES = ['algebra', 'concavity-classes', 'flow-derivatives', 'maxent', 'cramer-rao']
ALL_SUITES = 'all'

# Exit codes of the command line
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_PROPERTY = 4

# Default curve grid: lo:hi:step
DEFAULT_GRID = '0.05:1:0.05'

# Default n list of the accumulation experiment
DEFAULT_N_LIST = [1, 2, 4, 8, 16, 32]

# Significant digits for CSV floats
CSV_FLOAT_FMT = '%.17g'

# Tolerance on sum(probs) + deficit at Pmf construction
NORM_TOL = 1e-12
