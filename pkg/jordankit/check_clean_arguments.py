from sympy import isprime

from .survey import FORMATS


def validate_prime(p, flag="--p", allow_zero=True):
    """Parse a prime (or 0 when ``allow_zero``) given on the command line."""
    try:
        p_int = int(p)
    except (TypeError, ValueError):
        raise ValueError(f"{flag} needs to be an integer")
    if p_int == 0 and allow_zero:
        return 0
    if not isprime(p_int):
        raise ValueError(f"{flag} needs to be a prime{' or 0' if allow_zero else ''}, got {p_int}")
    return p_int


def validate_p_mode(p):
    """Like validate_prime, but also accepts 'defining' (each group's own characteristic)."""
    if isinstance(p, str) and p.strip().lower() == "defining":
        return "defining"
    return validate_prime(p)


def validate_positive(value, flag):
    # make sure it can be converted to integer
    try:
        value_int = int(value)
    except (TypeError, ValueError):
        raise ValueError(f"{flag} needs to be an integer")
    if value_int <= 0:
        raise ValueError(f"{flag} needs to be positive")
    return value_int


def validate_jobs(jobs):
    return validate_positive(jobs, "--jobs")


def validate_format(fmt):
    if fmt not in FORMATS:
        raise ValueError(f"--format needs to be one of {list(FORMATS)}, got {fmt!r}")
    return fmt
