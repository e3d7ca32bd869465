"""
SCLIC: Exceptions raised by the library

Input errors map to CLI exit code 2, numeric failures to exit code 3
"""

class SclicError(Exception):
    """Base class for all errors raised deliberately by sclic"""
    exit_code = 1

class InputError(SclicError, ValueError):
    """The request cannot be served for the given inputs"""
    exit_code = 2

class NumericFailure(SclicError, ArithmeticError):
    """A numerical post-condition failed"""
    exit_code = 3

class Inconsistent(InputError):
    """Linear system has no solution within tolerance"""

class EmptySet(InputError):
    """Set description describes the empty set"""

class ScaleExceeded(InputError):
    """Instance is beyond the supported desk-scale limits"""

class ZeroCone(InputError):
    """Operation needs a nonzero cone"""

class NotApplicable(InputError):
    """Operation precondition on the certificate does not hold"""

class RayNotInterior(InputError):
    """Ray is not in the relative interior of the cone"""

class NotCertifiedB(InputError):
    """Map is not certified by the relative-interior kernel condition"""

class NotSurjective(InputError):
    """Linear map does not have full row rank"""
