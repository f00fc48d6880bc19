"""Command-line front end.

    ilmf eval   --json '{"family": "D", "kind": "complete", ...}'
    ilmf eval   --input kernel.json          # {"kernel": "hyp1f1", "B": ..., "C": ..., "z": ...}
    ilmf verify --seed 42 --ids decomposition --family A
    ilmf oracle --family D --n 2 --seed 3
    ilmf list

Exit codes: 0 success, 1 numeric failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import matrix_special as ms
from . import series
from .errors import IlmfError, InputError, NoConvergence
from .linalg import matrix_from_json, matrix_to_json, rel_frobenius
from .representations import representations
from .series import FAMILIES, KINDS, Evaluation, IlmfParams, SeriesPolicy
from .verify import IDENTITY_IDS, TOL_MULTI, make_draw, run_suite

EXIT_OK, EXIT_NUMERIC, EXIT_INPUT = 0, 1, 2
MAX_ORDER_LIMIT = 200
MIN_TAIL_TOL = 1e-15
ENV_MAX_ORDER = "ILMF_MAX_ORDER"


class UsageError(Exception):
    pass


# -- output ------------------------------------------------------------------

def _num(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if z.imag < 0 or (z.imag == 0 and math.copysign(1.0, z.imag) < 0) else "+"
    return f"{_num(z.real)}{sign}{_num(abs(z.imag))}j"


def _matrix_table(M) -> list[str]:
    M = np.asarray(M)
    return ["  " + "  ".join(_fmt_complex(v) for v in row) for row in M]


def _emit(text: str) -> None:
    sys.stdout.write(text + "\n")


# -- input -------------------------------------------------------------------

def _load_input(args, required: bool = True):
    if args.input and args.json:
        raise UsageError("give either --input or --json, not both")
    try:
        if args.input:
            text = Path(args.input).read_text(encoding="utf-8")
        elif args.json:
            text = args.json
        elif required:
            raise UsageError("an input is required (--input PATH or --json STRING)")
        else:
            return None
    except OSError as exc:
        raise UsageError(f"cannot read input: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not valid JSON: {exc}") from None


def _policy(args, overrides: dict | None = None) -> SeriesPolicy:
    fields = dict(overrides or {})
    unknown = set(fields) - set(SeriesPolicy.__dataclass_fields__)
    if unknown:
        raise UsageError(f"policy: unknown fields {sorted(unknown)}")
    order = args.max_order
    if order is None and os.environ.get(ENV_MAX_ORDER):
        try:
            order = int(os.environ[ENV_MAX_ORDER])
        except ValueError:
            raise UsageError(f"{ENV_MAX_ORDER} must be an integer") from None
    if order is not None:
        fields["max_order_per_index"] = order
        fields["max_total_order"] = order
    if args.tail_tol is not None:
        fields["tail_tol"] = args.tail_tol
    for key in ("max_order_per_index", "max_total_order"):
        if key in fields and not (isinstance(fields[key], int) and 1 <= fields[key] <= MAX_ORDER_LIMIT):
            raise UsageError(f"{key} must be an integer in [1, {MAX_ORDER_LIMIT}]")
    if "tail_tol" in fields and not (isinstance(fields["tail_tol"], (int, float))
                                     and MIN_TAIL_TOL <= fields["tail_tol"] < 1):
        raise UsageError(f"tail_tol must lie in [{MIN_TAIL_TOL}, 1)")
    return SeriesPolicy(**fields)


def _field(obj: dict, key: str):
    if key not in obj:
        raise InputError(f"{key}: missing")
    return obj[key]


def _complex(obj: dict, key: str) -> complex:
    value = _field(obj, key)
    if isinstance(value, list) and len(value) == 2:
        value = complex(*value)
    if isinstance(value, bool) or not isinstance(value, (int, float, complex)):
        raise InputError(f"{key}: expected a number or [re, im]")
    return complex(value)


def _real(obj: dict, key: str, default=None):
    value = obj.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{key}: expected a real number")
    return float(value)


def _mat(obj: dict, key: str) -> np.ndarray:
    return matrix_from_json(_field(obj, key), key)


def _mats(obj: dict, key: str) -> list:
    value = _field(obj, key)
    if not isinstance(value, list):
        raise InputError(f"{key}: expected a list")
    return [matrix_from_json(m, f"{key}[{i}]") for i, m in enumerate(value)]


def _zs(obj: dict, key: str) -> list:
    value = _field(obj, key)
    if not isinstance(value, list):
        raise InputError(f"{key}: expected a list")
    return [_complex({f"{key}[{i}]": z}, f"{key}[{i}]") for i, z in enumerate(value)]


def _int(obj: dict, key: str) -> int:
    value = _field(obj, key)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise InputError(f"{key}: expected a non-negative integer")
    return value


# named kernels: each maps (payload, policy) to an Evaluation or a bare matrix
KERNELS = {
    "hyp1f1": lambda o, p: series.hyp1f1(_mat(o, "B"), _mat(o, "C"), _complex(o, "z"), p),
    "hyp0f1": lambda o, p: series.hyp0f1(_mat(o, "C"), _complex(o, "z"), p),
    "inc_gauss_2f1": lambda o, p: series.inc_gauss_2f1(
        _field(o, "kind"), _mat(o, "A"), _real(o, "x"), _mat(o, "B"), _mat(o, "C"), _complex(o, "z"), p),
    "inc_confluent_1g1": lambda o, p: series.inc_confluent_1g1(
        _field(o, "kind"), _mat(o, "A"), _real(o, "x"), _mat(o, "C"), _complex(o, "z"), p),
    "confluent_psi2": lambda o, p: series.confluent_psi2(_mat(o, "B"), _mats(o, "C_list"), _zs(o, "z_list"), p),
    "confluent_phi2": lambda o, p: series.confluent_phi2(_mats(o, "B_list"), _mat(o, "C"), _zs(o, "z_list"), p),
    "gamma_matrix": lambda o, p: ms.gamma_matrix(_mat(o, "A")),
    "gamma_matrix_inverse": lambda o, p: ms.gamma_matrix_inverse(_mat(o, "A")),
    "inc_gamma_matrix": lambda o, p: ms.inc_gamma_matrix(_field(o, "kind"), _mat(o, "A"), _real(o, "x")),
    "pochhammer": lambda o, p: ms.pochhammer(_mat(o, "A"), _int(o, "n"), o.get("kind", "complete"), _real(o, "x")),
    "bessel_matrix": lambda o, p: ms.bessel_matrix(_field(o, "variant"), _mat(o, "A"), _real(o, "z")),
    "laguerre_matrix": lambda o, p: ms.laguerre_matrix(_mat(o, "A"), _real(o, "lam", 1.0), _int(o, "n"),
                                                       _complex(o, "z")),
}


# -- commands ----------------------------------------------------------------

def _evaluate(payload, policy: SeriesPolicy):
    if not isinstance(payload, dict):
        raise InputError("input: expected a JSON object")
    if "kernel" in payload:
        name = payload["kernel"]
        if name not in KERNELS:
            raise InputError(f"kernel: unknown {name!r}; valid kernels: {', '.join(KERNELS)}")
        return KERNELS[name](payload, policy)
    return series.ilmf(IlmfParams.from_json(payload), policy)


def cmd_eval(args) -> int:
    payload = _load_input(args)
    overrides = payload.get("policy") if isinstance(payload, dict) else None
    if overrides is not None and not isinstance(overrides, dict):
        raise UsageError("policy: expected a JSON object")
    result = _evaluate(payload, _policy(args, overrides))
    if isinstance(result, Evaluation):
        out = result.to_json()
    else:
        out = {"value": matrix_to_json(result)}
    if args.format == "table":
        lines = ["value:"] + _matrix_table(result.value if isinstance(result, Evaluation) else result)
        for key in ("terms_summed", "tail_estimate", "truncated"):
            if key in out:
                v = out[key]
                lines.append(f"{key}: {_num(v) if isinstance(v, float) else v}")
        _emit("\n".join(lines))
    else:
        _emit(dumps(out))
    return EXIT_OK


def _verify_config(args) -> dict:
    config = _load_input(args, required=False) or {}
    if not isinstance(config, dict):
        raise UsageError("verify config: expected a JSON object")
    if args.ids:
        config["ids"] = [s.strip() for s in args.ids.split(",") if s.strip()]
    if args.family:
        config["families"] = [args.family]
    if args.draws is not None:
        if args.draws < 1:
            raise UsageError("--draws must be positive")
        config["draws"] = args.draws
    unknown = [i for i in config.get("ids", []) if i not in IDENTITY_IDS]
    if unknown:
        raise UsageError(f"unknown identity ids: {', '.join(unknown)}\nvalid ids: {', '.join(IDENTITY_IDS)}")
    return config


def cmd_verify(args) -> int:
    config = _verify_config(args)
    try:
        report = run_suite(args.seed, config, _policy(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "table":
        summary = report.summary()
        width = max(len(k) for k in summary["per_identity"]) if summary["per_identity"] else 10
        lines = [f"{'identity':<{width}}  passed/total"]
        for key, entry in summary["per_identity"].items():
            lines.append(f"{key:<{width}}  {entry['passed']}/{entry['total']}")
        lines.append(f"all_passed: {summary['all_passed']}")
        _emit("\n".join(lines))
    else:
        _emit(dumps(report.to_json()))
    return EXIT_OK if report.all_passed else EXIT_NUMERIC


def _oracle_params(args) -> IlmfParams:
    payload = _load_input(args, required=False)
    if payload is not None:
        return IlmfParams.from_json(payload)
    family = args.family or "A"
    if not 1 <= args.n <= 3 or not 1 <= args.r <= 4:
        raise UsageError("--n must be in [1, 3] and --r in [1, 4]")
    return make_draw(args.seed, family, args.n, args.r).params


def cmd_oracle(args) -> int:
    params = _oracle_params(args)
    policy = _policy(args)
    series.check_guard(params.family, params.z_list, policy.z_guard)
    values = {"series": series.ilmf(params, policy).value}
    values.update(representations(params))
    names = list(values)
    deviations = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            deviations[f"{a} vs {b}"] = rel_frobenius(values[a], values[b])
    agree = all(d <= TOL_MULTI for d in deviations.values())
    if args.format == "table":
        lines = []
        for name, M in values.items():
            lines.append(f"{name}:")
            lines.extend(_matrix_table(M))
        width = max(len(k) for k in deviations) if deviations else 0
        lines.append("deviations:")
        lines.extend(f"  {k:<{width}}  {_num(v)}" for k, v in deviations.items())
        lines.append(f"agree (<= {_num(TOL_MULTI)}): {agree}")
        _emit("\n".join(lines))
    else:
        _emit(dumps({
            "params": params.to_json(),
            "values": {k: matrix_to_json(v) for k, v in values.items()},
            "deviations": deviations,
            "tolerance": TOL_MULTI,
            "agree": agree,
        }))
    return EXIT_OK if agree else EXIT_NUMERIC


def cmd_list(args) -> int:
    out = {"identity_ids": list(IDENTITY_IDS), "families": list(FAMILIES), "kinds": list(KINDS),
           "kernels": list(KERNELS)}
    if args.format == "table":
        _emit("\n".join(f"{k}: {', '.join(v)}" for k, v in out.items()))
    else:
        _emit(dumps(out))
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", metavar="PATH", help="JSON input file")
    common.add_argument("--json", metavar="STRING", help="inline JSON input")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--max-order", type=int, default=None,
                        help=f"series truncation order (default from {ENV_MAX_ORDER} or the policy)")
    common.add_argument("--tail-tol", type=float, default=None)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--ids", help="comma-separated identity ids (verify)")
    common.add_argument("--family", choices=FAMILIES)
    common.add_argument("--draws", type=int, default=None)

    parser = _Parser(prog="ilmf", description="Incomplete Lauricella matrix functions")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("eval", parents=[common], help="evaluate a function on JSON input")
    sub.add_parser("verify", parents=[common], help="run the identity verification suite")
    oracle = sub.add_parser("oracle", parents=[common], help="series against quadrature representations")
    oracle.add_argument("--n", type=int, default=1, help="number of variables for a seeded draw")
    oracle.add_argument("--r", type=int, default=2, help="matrix size for a seeded draw")
    sub.add_parser("list", parents=[common], help="list identity ids, families and kernels")
    return parser


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "oracle": cmd_oracle, "list": cmd_list}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"ilmf: error: {exc}\n")
        return EXIT_INPUT
    except (NoConvergence, ArithmeticError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"ilmf: numeric failure: {exc}\n")
        return EXIT_NUMERIC
    except (IlmfError, ValueError) as exc:
        sys.stderr.write(f"ilmf: invalid input: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
