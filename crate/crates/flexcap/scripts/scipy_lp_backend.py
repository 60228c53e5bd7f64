#!/usr/bin/env python3
"""External LP backend for flexcap built on scipy's HiGHS interface.

Usage: scipy_lp_backend.py IN.mps OUT.sol

Reads the fixed-layout MPS written by flexcap (N, L, G, E rows; FR, FX, MI,
LO, UP bounds) and writes a solution file:

    status optimal|infeasible|unbounded
    objective <value>
    primal <column> <value>      one line per column, file order
    dual <row> <value>           one line per row, d(objective)/d(rhs)

Exit codes: 0 solution file written, 1 solver failure, 2 usage or parse error.
"""

import sys

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix


def parse_mps(path):
    rows, senses, obj = [], {}, None
    cols, col_index = [], {}
    cost, entries, rhs, bounds = {}, [], {}, {}
    section = None
    with open(path, encoding="ascii") as f:
        for raw in f:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("*"):
                continue
            if not line.startswith(" "):
                section = line.split()[0]
                if section == "ENDATA":
                    break
                continue
            tok = line.split()
            if section == "ROWS":
                if tok[0] == "N":
                    obj = tok[1]
                else:
                    senses[tok[1]] = tok[0]
                    rows.append(tok[1])
            elif section == "COLUMNS":
                name, row, val = tok[0], tok[1], float(tok[2])
                if name not in col_index:
                    col_index[name] = len(cols)
                    cols.append(name)
                if row == obj:
                    cost[name] = val
                else:
                    entries.append((row, name, val))
            elif section == "RHS":
                rhs[tok[1]] = float(tok[2])
            elif section == "BOUNDS":
                kind, name = tok[0], tok[2]
                lo, hi = bounds.get(name, (0.0, None))
                if kind == "FR":
                    lo, hi = None, None
                elif kind == "MI":
                    lo = None
                elif kind == "LO":
                    lo = float(tok[3])
                elif kind == "UP":
                    hi = float(tok[3])
                elif kind == "FX":
                    lo = hi = float(tok[3])
                else:
                    raise ValueError("unsupported bound type " + kind)
                bounds[name] = (lo, hi)
            else:
                raise ValueError("data outside a section")
    return rows, senses, cols, col_index, cost, entries, rhs, bounds


def main(argv):
    if len(argv) != 3:
        sys.stderr.write(__doc__)
        return 2
    try:
        rows, senses, cols, col_index, cost, entries, rhs, bounds = parse_mps(argv[1])
    except (OSError, ValueError, IndexError) as e:
        sys.stderr.write("cannot read %s: %s\n" % (argv[1], e))
        return 2

    n = len(cols)
    c = np.array([cost.get(name, 0.0) for name in cols])
    ub_rows = [r for r in rows if senses[r] in ("L", "G")]
    eq_rows = [r for r in rows if senses[r] == "E"]
    ub_pos = {r: i for i, r in enumerate(ub_rows)}
    eq_pos = {r: i for i, r in enumerate(eq_rows)}
    ub_data, eq_data = ([], [], []), ([], [], [])
    for row, name, val in entries:
        j = col_index[name]
        if row in ub_pos:
            sign = -1.0 if senses[row] == "G" else 1.0
            ub_data[0].append(sign * val)
            ub_data[1].append(ub_pos[row])
            ub_data[2].append(j)
        else:
            eq_data[0].append(val)
            eq_data[1].append(eq_pos[row])
            eq_data[2].append(j)
    b_ub = np.array([(-1.0 if senses[r] == "G" else 1.0) * rhs.get(r, 0.0) for r in ub_rows])
    b_eq = np.array([rhs.get(r, 0.0) for r in eq_rows])
    a_ub = csr_matrix((ub_data[0], (ub_data[1], ub_data[2])), shape=(len(ub_rows), n)) if ub_rows else None
    a_eq = csr_matrix((eq_data[0], (eq_data[1], eq_data[2])), shape=(len(eq_rows), n)) if eq_rows else None
    bnds = [bounds.get(name, (0.0, None)) for name in cols]

    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub if ub_rows else None,
        A_eq=a_eq,
        b_eq=b_eq if eq_rows else None,
        bounds=bnds,
        method="highs",
        options={"primal_feasibility_tolerance": 1e-9, "dual_feasibility_tolerance": 1e-9},
    )
    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}.get(res.status)
    if status is None:
        sys.stderr.write("highs status %d: %s\n" % (res.status, res.message))
        return 1

    with open(argv[2], "w", encoding="ascii") as out:
        out.write("status %s\n" % status)
        if status != "optimal":
            return 0
        out.write("objective %r\n" % float(res.fun))
        for name, v in zip(cols, res.x):
            out.write("primal %s %r\n" % (name, float(v)))
        ub_m = res.ineqlin.marginals if ub_rows else []
        eq_m = res.eqlin.marginals if eq_rows else []
        for r in rows:
            if senses[r] == "E":
                d = float(eq_m[eq_pos[r]])
            elif senses[r] == "G":
                d = -float(ub_m[ub_pos[r]])
            else:
                d = float(ub_m[ub_pos[r]])
            out.write("dual %s %r\n" % (r, d + 0.0))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
