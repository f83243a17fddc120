import json as _json

from ._wavemera import *  # noqa: F401,F403
from ._wavemera import WavemeraError, error_report as _error_report


def error_report(stack, N, quad_points=1 << 16):
    return _json.loads(_error_report(stack, N, quad_points))
