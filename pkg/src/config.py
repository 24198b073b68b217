"""Configuration constants for loomp."""

# Interpreter
DEFAULT_STEP_LIMIT = 10_000_000

# Heuristic unroll factor used when an unroll without clause is consumed
# by an outer directive
HEURISTIC_UNROLL_FACTOR = 2

# Largest trip count a full unroll expands
MAX_FULL_UNROLL = 65_536

# Backends and strategies
BACKENDS = ['shadow', 'irbuilder']
UNROLL_STRATEGIES = ['guarded-clone', 'remainder-loop', 'strip-mine-hint']
DEFAULT_BACKEND = 'shadow'
DEFAULT_UNROLL_STRATEGY = 'strip-mine-hint'
DEFAULT_NUM_THREADS = 1

# CLI exit codes
EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_VERIFY_FAILED = 2
EXIT_USAGE = 3

# Prefixes of compiler-generated variables; never shown to users without
# a provenance note
INTERNAL_PREFIXES = (
    'unrolled.iv.', 'unroll_inner.iv.', 'tile.', 'capture.', 'tripcount.',
    'collapsed.iv.', 'omp.',
)

# Sample programs shipped with the repository
CORPUS_DIR = 'src/data/corpus'
