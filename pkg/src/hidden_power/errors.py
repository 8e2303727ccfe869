"""Exception hierarchy shared by all modules."""


class HiddenPowerError(Exception):
    """Base class; ``code`` is the short machine-readable tag used in reports."""

    code = "error"


class NotPrime(HiddenPowerError, ValueError):
    code = "not_prime"

    def __init__(self, p):
        super().__init__(f"{p} is not prime")
        self.p = p


class ExponentDoesNotDivide(HiddenPowerError, ValueError):
    code = "exponent_does_not_divide"

    def __init__(self, e, n):
        super().__init__(f"{e} does not divide {n}")
        self.e = e
        self.n = n


class ModulusTooLarge(HiddenPowerError, ValueError):
    code = "modulus_too_large"


class DivisionByZero(HiddenPowerError, ZeroDivisionError):
    code = "division_by_zero"


class DuplicateNode(HiddenPowerError, ValueError):
    code = "duplicate_node"

    def __init__(self, a):
        super().__init__(f"duplicate interpolation node {a}")
        self.a = a


class NotInSubgroup(HiddenPowerError, ValueError):
    code = "not_in_subgroup"


class NotAnEthPower(HiddenPowerError, ValueError):
    code = "not_an_eth_power"


class ZeroInput(HiddenPowerError, ValueError):
    code = "zero_input"


class OutOfDomain(HiddenPowerError, ValueError):
    code = "out_of_domain"


class ProtocolError(HiddenPowerError):
    code = "protocol"


class BudgetExceedsField(HiddenPowerError, ValueError):
    code = "budget_exceeds_field"


class DegenerateBudget(HiddenPowerError, ValueError):
    code = "degenerate_budget"


class DegreeOverflow(HiddenPowerError, ValueError):
    code = "degree_overflow"


class NotAPerfectPower(HiddenPowerError):
    code = "not_a_perfect_power"


class SearchExhausted(HiddenPowerError):
    code = "search_exhausted"


class TooManyRoots(HiddenPowerError):
    code = "too_many_roots"


class SearchTooLarge(HiddenPowerError, ValueError):
    code = "search_too_large"


class FieldTooLarge(HiddenPowerError, ValueError):
    code = "field_too_large"


class BudgetTooLarge(HiddenPowerError, ValueError):
    code = "budget_too_large"
