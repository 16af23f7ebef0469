"""Python access to the truncation and potential-operator core."""

import json

try:
    from . import _mz
except ImportError:  # build tree: the extension sits next to, not inside, the package
    import _mz

read_fld = _mz.read_fld
write_fld = _mz.write_fld
hausdorff = lambda a, b: _mz.hausdorff(json.dumps(a), json.dumps(b))
sup_norm = lambda body: _mz.sup_norm(json.dumps(body))
profile_certificate = _mz.profile_certificate
operator_c1 = _mz.operator_c1
Error = _mz.Error
InvalidArgument = _mz.InvalidArgument
DivergenceError = _mz.DivergenceError


def project(body, point):
    """Distance from `point` to the body and the nearest point."""
    return _mz.project(json.dumps(body), list(point))


def build_schedule(gamma, d, M, alpha, K_sup, C1):
    return json.loads(_mz.build_schedule(gamma, d, M, alpha, K_sup, C1))


def truncate_whole_space(u, spacing, origin, operator, K, gamma, M, alpha=0.0):
    """Returns (g, report); u has the grid axes followed by a component axis."""
    g, report = _mz.truncate_whole_space(u, spacing, list(origin), operator, json.dumps(K), gamma, M, alpha)
    return g, json.loads(report)


def run_config(config, base_dir=".", out_dir=None):
    """Returns (exit_code, message, report)."""
    code, message, report = _mz.run_config(json.dumps(config), base_dir, out_dir)
    return code, message, json.loads(report) if report and report != "null" else None


def run_euler_potential(d, n, seed):
    state, report = _mz.run_euler_potential(d, n, seed)
    return state, json.loads(report)


def symbol_check(pair, d, trials=100, tol=1e-12):
    return json.loads(_mz.symbol_check(pair, d, trials, tol))
