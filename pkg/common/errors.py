class ErrorCodes:
    """
    Catálogo centralizado de errores.
    Evita usar strings mágicos dispersos por el código.
    """

    # General
    INTERNAL_ERROR = "sys_001"
    COMMAND_DISCOVERY = "sys_002"

    # Input
    INVALID_INPUT = "input_001"
    UNKNOWN_LABEL = "input_002"
    UNKNOWN_GENERATOR = "input_003"
    NON_CYCLIC = "input_004"
    DEGREE_EXCEEDED = "input_005"
    NOT_COMPOSABLE = "input_006"
    LOOPS_NOT_ALLOWED = "input_007"

    # Division algebras
    INVALID_TABLE = "algebra_001"
    CHARACTERISTIC_DIVIDES_DIMENSION = "algebra_002"
    NOT_A_DIVISION_ALGEBRA = "algebra_003"

    # Series and morphisms
    BIMODULE_MISMATCH = "series_001"
    NOT_LEGIBLE = "series_002"
    NOT_UNITRIANGULAR = "series_003"
    NOT_INVERTIBLE = "series_004"

    # Reduction
    NOT_DECOMPOSABLE = "reduction_001"
    SPLIT_DIVERGED = "reduction_002"

    # Mutation
    MUTATION_UNDEFINED = "mutation_001"
    NOT_SPLITTABLE = "mutation_002"

    # Exchange matrices
    NOT_SKEW_SYMMETRIZABLE = "matrix_001"
    DIVISIBILITY = "matrix_002"

    # Search
    SEARCH_EXHAUSTED = "search_001"
    INFINITE_FIELD_REQUIRED = "search_002"
