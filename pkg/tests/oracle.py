"""Straight-line reference implementation of the layout cost.

Pure Python and ``math`` only, written from the model definition without
touching the package's geometry or force code. Used to cross-check the
vectorised path.
"""

import math


def pulley_xyz(params, x_off):
    w1, h1, w2, h2, w3, h3, w4, h4 = params
    return {
        "FUL": (x_off, w1 / 2, h1), "FUR": (x_off, -w1 / 2, h1),
        "FLL": (x_off, w2 / 2, h2), "FLR": (x_off, -w2 / 2, h2),
        "BUL": (-x_off, w3 / 2, h3), "BUR": (-x_off, -w3 / 2, h3),
        "BLL": (-x_off, w4 / 2, h4), "BLR": (-x_off, -w4 / 2, h4),
    }


def dist(a, b):
    return math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2)


def frames(traj):
    """List of dicts with plain-tuple attachment points."""
    out = []
    for i in range(len(traj.t)):
        out.append({
            "la": tuple(float(v) for v in traj.left_anterior[i]),
            "lp": tuple(float(v) for v in traj.left_posterior[i]),
            "ra": tuple(float(v) for v in traj.right_anterior[i]),
            "rp": tuple(float(v) for v in traj.right_posterior[i]),
        })
    return out


def routes(mode):
    # (start attachment, pulley chain, end attachment or None)
    if mode == "independent":
        return [("la", ["FLL", "FUL"], None), ("ra", ["FLR", "FUR"], None),
                ("lp", ["BLL", "BUL"], None), ("rp", ["BLR", "BUR"], None)]
    return [("la", ["FLL", "FUL", "FUR", "FLR"], "ra"),
            ("lp", ["BLL", "BUL", "BUR", "BLR"], "rp")]


def leg_forces(traj, params, mode="independent", k=300.0, x_off=0.75):
    """Per frame (left force, right force) as 3-tuples."""
    P = pulley_xyz(params, x_off)
    fr = frames(traj)
    result = [([0.0, 0.0, 0.0], [0.0, 0.0, 0.0]) for _ in fr]
    for start, chain, end in routes(mode):
        lengths = []
        for f in fr:
            pts = [f[start]] + [P[c] for c in chain] + ([f[end]] if end else [])
            lengths.append(sum(dist(pts[i], pts[i + 1]) for i in range(len(pts) - 1)))
        slack = min(lengths)
        for f, length, (left, right) in zip(fr, lengths, result):
            tension = k * max(0.0, length - slack)
            for att, pul in ((start, chain[0]), (end, chain[-1])):
                if att is None:
                    continue
                d = dist(f[att], P[pul])
                target = left if att[0] == "l" else right
                for j in range(3):
                    target[j] += tension * (P[pul][j] - f[att][j]) / d
    return result


def cost(traj_list, params, mode="independent", k=300.0, x_off=0.75):
    per_traj = []
    for traj in traj_list:
        forces = leg_forces(traj, params, mode, k, x_off)
        n = len(forces)
        total = 0.0
        for leg in (0, 1):
            for j in range(3):
                total += math.sqrt(sum(fr[leg][j] ** 2 for fr in forces) / n)
        per_traj.append(total)
    return sum(per_traj) / len(per_traj)
