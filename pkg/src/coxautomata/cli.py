"""Command-line entry point: parse a system, run the pipeline, emit tables,
reports and automata.

Systems come either from a named type (standard finite and affine families)
or an explicit Coxeter matrix as JSON {"rank": n, "m": [[...]]} with 0
encoding an infinite bond.  Outputs are deterministic for identical
invocations.
"""

import argparse
import json
import re
import sys

from . import analysis, automata
from .core import CoxeterMatrix, CoxeterSystem, ValidationError


class SpecError(ValueError):
    """Unparseable system description."""


class SystemSpec:
    def __init__(self, name, matrix):
        self.name = name
        self.matrix = matrix

    def build(self):
        return CoxeterSystem(self.matrix)


def _matrix_from_bonds(rank, bonds):
    m = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
    for i, j, label in bonds:
        m[i][j] = m[j][i] = label
    return CoxeterMatrix(m)


def _chain(labels):
    rank = len(labels) + 1
    return _matrix_from_bonds(rank, [(i, i + 1, lab) for i, lab in enumerate(labels)])


def named_matrix(name):
    """Coxeter matrix of a named finite or affine type, e.g. A3, B~2, I2(7)."""
    m = re.fullmatch(r"I2\((\d+)\)", name)
    if m:
        label = int(m.group(1))
        if label < 3:
            raise SpecError(f"I2({label}) needs a label >= 3")
        return _chain([label])
    m = re.fullmatch(r"([A-Z])(~?)(\d+)", name)
    if not m:
        raise SpecError(
            f"unknown system name {name!r} (expected e.g. A3, B~2, I2(7), or a matrix)"
        )
    letter, affine, n = m.group(1), m.group(2) == "~", int(m.group(3))
    try:
        return _NAMED[(letter, affine)](n)
    except KeyError:
        raise SpecError(f"unknown family {letter}{'~' if affine else ''}") from None


def _require(cond, msg):
    if not cond:
        raise SpecError(msg)


def _finite_a(n):
    _require(n >= 1, "A_n needs n >= 1")
    return _chain([3] * (n - 1)) if n > 1 else CoxeterMatrix([[1]])


def _finite_b(n):
    _require(n >= 2, "B_n needs n >= 2")
    return _chain([4] + [3] * (n - 2))


def _finite_d(n):
    _require(n >= 4, "D_n needs n >= 4")
    bonds = [(0, 2, 3), (1, 2, 3)] + [(i, i + 1, 3) for i in range(2, n - 1)]
    return _matrix_from_bonds(n, bonds)


def _finite_e(n):
    _require(n in (6, 7, 8), "E_n needs n in {6,7,8}")
    # chain 0-1-...-(n-2) with node n-1 hanging off node 2
    bonds = [(i, i + 1, 3) for i in range(n - 2)] + [(2, n - 1, 3)]
    return _matrix_from_bonds(n, bonds)


def _finite_f(n):
    _require(n == 4, "F_n is only defined for n = 4")
    return _chain([3, 4, 3])


def _finite_g(n):
    _require(n == 2, "G_n is only defined for n = 2")
    return _chain([6])


def _finite_h(n):
    _require(n in (3, 4), "H_n needs n in {3,4}")
    return _chain([5] + [3] * (n - 2))


def _affine_a(n):
    _require(n >= 1, "A~n needs n >= 1")
    if n == 1:
        return CoxeterMatrix([[1, 0], [0, 1]])  # infinite dihedral
    bonds = [(i, (i + 1) % (n + 1), 3) for i in range(n + 1)]
    return _matrix_from_bonds(n + 1, bonds)


def _affine_b(n):
    if n == 2:
        return _affine_c(2)
    _require(n >= 3, "B~n needs n >= 2")
    bonds = [(0, 2, 3), (1, 2, 3)] + [(i, i + 1, 3) for i in range(2, n - 1)]
    bonds.append((n - 1, n, 4))
    return _matrix_from_bonds(n + 1, bonds)


def _affine_c(n):
    _require(n >= 2, "C~n needs n >= 2")
    return _chain([4] + [3] * (n - 2) + [4])


def _affine_d(n):
    _require(n >= 4, "D~n needs n >= 4")
    bonds = [(0, 2, 3), (1, 2, 3)] + [(i, i + 1, 3) for i in range(2, n - 2)]
    bonds += [(n - 2, n - 1, 3), (n - 2, n, 3)]
    return _matrix_from_bonds(n + 1, bonds)


def _affine_e(n):
    _require(n in (6, 7, 8), "E~n needs n in {6,7,8}")
    base = _finite_e(n)
    bonds = [
        (i, j, base.m[i][j])
        for i in range(n)
        for j in range(i + 1, n)
        if base.m[i][j] != 2
    ]
    attach = {6: n - 1, 7: 0, 8: n - 2}[n]
    bonds.append((attach, n, 3))
    return _matrix_from_bonds(n + 1, bonds)


def _affine_f(n):
    _require(n == 4, "F~n is only defined for n = 4")
    return _chain([3, 3, 4, 3])


def _affine_g(n):
    _require(n == 2, "G~n is only defined for n = 2")
    return _chain([6, 3])


_NAMED = {
    ("A", False): _finite_a,
    ("B", False): _finite_b,
    ("C", False): _finite_b,
    ("D", False): _finite_d,
    ("E", False): _finite_e,
    ("F", False): _finite_f,
    ("G", False): _finite_g,
    ("H", False): _finite_h,
    ("A", True): _affine_a,
    ("B", True): _affine_b,
    ("C", True): _affine_c,
    ("D", True): _affine_d,
    ("E", True): _affine_e,
    ("F", True): _affine_f,
    ("G", True): _affine_g,
}


def parse_spec(text):
    """Named type or JSON matrix; raises SpecError with a position on bad input."""
    text = text.strip()
    if not text:
        raise SpecError("empty system description")
    if text.startswith("{"):
        try:
            matrix = CoxeterMatrix.from_json(text)
        except ValidationError as exc:
            raise SpecError(str(exc)) from None
        return SystemSpec(None, matrix)
    return SystemSpec(text, named_matrix(text))


def _spec_from_args(args):
    if getattr(args, "type", None):
        return parse_spec(args.type)
    if getattr(args, "matrix", None):
        with open(args.matrix) as fh:
            content = fh.read()
        spec = parse_spec(content)
        return SystemSpec(args.matrix, spec.matrix)
    raise SpecError("one of --type or --matrix is required")


_INFO_COLUMNS = [
    ("|E|", "elementary"),
    ("|Phi+sph|", "spherical_positive"),
    ("|L|", "low"),
    ("|Gamma|", "gates"),
    ("|U|", "ultra_low"),
    ("|SE|", "super_elementary"),
    ("A_bh", "states_canonical"),
    ("A_gate", "states_gate"),
    ("A_low", "states_garside_low"),
    ("A_min", "states_minimal"),
]


def cmd_info(args, out):
    spec = _spec_from_args(args)
    system = spec.build()
    counts = analysis.pipeline_counts(system)
    name = spec.name or "matrix"
    if args.json:
        out.write(json.dumps({"system": name, "counts": counts}, indent=2) + "\n")
        return 0
    headers = ["system"] + [h for h, _ in _INFO_COLUMNS]
    row = [name] + [str(counts[k]) for _, k in _INFO_COLUMNS]
    widths = [max(len(h), len(v)) for h, v in zip(headers, row)]
    out.write("  ".join(h.rjust(w) for h, w in zip(headers, widths)) + "\n")
    out.write("  ".join(v.rjust(w) for v, w in zip(row, widths)) + "\n")
    return 0


def cmd_automaton(args, out):
    spec = _spec_from_args(args)
    system = spec.build()
    if args.kind == "bh":
        auto = automata.build_canonical(system)
    elif args.kind == "gate":
        auto = automata.build_gate_automaton(system)
    else:
        from .lowgate import low_elements

        auto = automata.build_garside(system, low_elements(system))
    text = auto.to_dot() if args.emit == "dot" else auto.to_json() + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def cmd_growth(args, out):
    spec = _spec_from_args(args)
    system = spec.build()
    from .lowgate import low_elements

    autos = [
        ("bh", automata.build_canonical(system)),
        ("gate", automata.build_gate_automaton(system)),
        ("garside-low", automata.build_garside(system, low_elements(system))),
    ]
    n = args.max_len
    brute = automata.brute_force_counts(system, n, cap=args.cap_elements)
    rows = [["len"] + [k for k, _ in autos] + ["brute-force"]]
    columns = [a.word_counts(n) for _, a in autos]
    for k in range(n + 1):
        rows.append([str(k)] + [str(c[k]) for c in columns] + [str(brute[k])])
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        out.write("  ".join(v.rjust(w) for v, w in zip(r, widths)) + "\n")
    agree = all(c == brute for c in columns)
    out.write(f"agreement: {'exact' if agree else 'MISMATCH'}\n")
    return 0 if agree else 1


def cmd_verify(args, out):
    spec = _spec_from_args(args)
    system = spec.build()
    name = spec.name or "matrix"
    report = analysis.verify_invariants(
        system,
        name=name,
        samples=args.samples,
        seed=args.seed,
        growth_depth=args.max_len,
        threads=args.threads,
    )
    report.checks.extend(analysis.check_order_isomorphism(system, seed=args.seed))
    report.checks.append(
        analysis.check_gate_join_closure(system, cutoff=args.join_cutoff, seed=args.seed)
    )
    report.checks.extend(analysis.check_shi_gated(system, cutoff=args.shi_cutoff))
    out.write(report.to_json() + "\n" if args.json else report.to_text())
    return 0 if report.ok() else 1


def _add_system_args(p):
    p.add_argument("--type", help="named system, e.g. A3, B~2, G~2, I2(7)")
    p.add_argument("--matrix", help="path to a JSON Coxeter matrix (0 = infinity)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="coxautomata",
        description="Elementary roots, low elements, gates and reduced-word "
        "automata of a Coxeter system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="cardinalities of the computed sets and automata")
    _add_system_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("automaton", help="emit an automaton as DOT or JSON")
    _add_system_args(p)
    p.add_argument("--kind", choices=["bh", "gate", "garside-low"], default="gate")
    p.add_argument("--emit", choices=["dot", "json"], default="dot")
    p.add_argument("-o", "--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_automaton)

    p = sub.add_parser("growth", help="reduced-word counts per length, with oracle")
    _add_system_args(p)
    p.add_argument("--max-len", type=int, default=12)
    p.add_argument("--cap-elements", type=int, default=5_000_000)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("verify", help="run the invariant suite and checkers")
    _add_system_args(p)
    p.add_argument("--max-len", type=int, default=12, help="language oracle depth")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--join-cutoff", type=int, default=8)
    p.add_argument("--shi-cutoff", type=int, default=8)
    p.add_argument("--cap-elements", type=int, default=5_000_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except (SpecError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except automata.ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
