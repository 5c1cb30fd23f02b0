"""Canonical JSON/CSV serialization for the domain types.

All floats are rendered with 17 significant digits (round-trip exact), dict
keys keep insertion order, so identical inputs produce byte-identical
output. Quaternions serialize as [s0, v1, v2, v3] arrays; LKS states use
the explicit field names (s, l, lambda, g, gamma, S, L, Lambda, G, Gamma)
with angles in radians.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .geometry import KeplerElements
from .ks import CartesianPhaseExt, KSFrame, KSPhase
from .kozai import Equilibrium, LKParams
from .lissajous import LKSState
from .quaternion import Quaternion

__all__ = [
    "fmt_float", "dumps_canonical", "csv_text", "trajectory_csv",
    "quaternion_to_list", "quaternion_from_list",
    "frame_to_dict", "frame_from_obj",
    "cartesian_to_dict", "cartesian_from_dict",
    "ks_phase_to_dict", "ks_phase_from_dict",
    "lks_state_to_dict", "lks_state_from_dict",
    "elements_to_dict", "elements_from_dict",
    "lk_params_to_dict", "lk_params_from_dict",
    "equilibrium_to_dict",
]


def fmt_float(x: float) -> str:
    """Fixed 17-significant-digit decimal rendering (round-trip exact)."""
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return format(float(x), ".17g")


def dumps_canonical(obj, indent: int = 0) -> str:
    """Deterministic JSON text: .17g floats, insertion-ordered keys."""
    pad = " " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(float(obj))
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        items = ", ".join(f"{dumps_canonical(k)}: {dumps_canonical(v)}"
                          for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps_canonical(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def csv_text(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    """CSV with the exact header names and .17g float cells."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_float(v) for v in row))
    return "\n".join(lines) + "\n"


def trajectory_csv(traj, stride: int = 1) -> str:
    """Chart-specific CSV of a trajectory, sampled every ``stride`` rows.

    The first column is the trajectory's independent variable (t or tau),
    followed by the chart's state columns.
    """
    header = (traj.time_variable,) + tuple(traj.columns)
    rows = ((traj.t[k], *traj.states[k])
            for k in range(0, len(traj.t), max(1, stride)))
    return csv_text(header, rows)


# --- quaternions and frames ---

def quaternion_to_list(q: Quaternion) -> list[float]:
    return [q.s0, q.v1, q.v2, q.v3]


def quaternion_from_list(vals) -> Quaternion:
    vals = list(vals)
    if len(vals) != 4:
        raise ValueError("quaternion must be a [s0, v1, v2, v3] array")
    return Quaternion(*(float(v) for v in vals))


def frame_to_dict(frame: KSFrame) -> dict:
    return {"c": list(frame.c), "f": list(frame.f)}


def frame_from_obj(obj) -> KSFrame:
    """Accepts the presets 'KS1'/'KS3' or a {"c": [...], "f": [...]} dict."""
    if isinstance(obj, str):
        return KSFrame.from_name(obj)
    return KSFrame(np.asarray(obj["c"], dtype=float),
                   np.asarray(obj["f"], dtype=float))


# --- phase points ---

def cartesian_to_dict(p: CartesianPhaseExt) -> dict:
    return {"x_star": p.x_star, "x": list(p.x), "X_star": p.X_star,
            "X": list(p.X)}


def cartesian_from_dict(d: dict) -> CartesianPhaseExt:
    return CartesianPhaseExt(float(d["x_star"]),
                             np.asarray(d["x"], dtype=float),
                             float(d["X_star"]),
                             np.asarray(d["X"], dtype=float))


def ks_phase_to_dict(k: KSPhase) -> dict:
    return {"v_star": k.v_star, "v": quaternion_to_list(k.v),
            "V_star": k.V_star, "V": quaternion_to_list(k.V)}


def ks_phase_from_dict(d: dict) -> KSPhase:
    return KSPhase(float(d["v_star"]), quaternion_from_list(d["v"]),
                   float(d["V_star"]), quaternion_from_list(d["V"]))


def lks_state_to_dict(s: LKSState) -> dict:
    return {"s": s.s, "l": s.l, "lambda": s.lam, "g": s.g, "gamma": s.gamma,
            "S": s.S, "L": s.L, "Lambda": s.Lam, "G": s.G, "Gamma": s.Gam}


def lks_state_from_dict(d: dict) -> LKSState:
    return LKSState(s=float(d["s"]), l=float(d["l"]), lam=float(d["lambda"]),
                    g=float(d["g"]), gamma=float(d["gamma"]),
                    S=float(d["S"]), L=float(d["L"]), Lam=float(d["Lambda"]),
                    G=float(d["G"]), Gam=float(d.get("Gamma", 0.0)))


def elements_to_dict(el: KeplerElements) -> dict:
    return {"a": el.a, "e": el.e, "I": el.inc, "omega_o": el.argp,
            "Omega": el.node, "f": el.f}


def elements_from_dict(d: dict, deg: bool = False) -> KeplerElements:
    conv = math.radians if deg else float
    return KeplerElements(a=float(d["a"]), e=float(d["e"]),
                          inc=conv(float(d["I"])),
                          argp=conv(float(d["omega_o"])),
                          node=conv(float(d["Omega"])),
                          f=conv(float(d["f"])))


def lk_params_to_dict(p: LKParams) -> dict:
    return {"mu": p.mu, "mu_p": p.mu_p, "a_p": p.a_p, "n_p": p.n_p,
            "S": p.S, "L": p.L, "G": p.G}


def lk_params_from_dict(d: dict) -> LKParams:
    return LKParams(mu=float(d["mu"]), mu_p=float(d["mu_p"]),
                    a_p=float(d["a_p"]), S=float(d["S"]), L=float(d["L"]),
                    G=float(d["G"]),
                    n_p=float(d["n_p"]) if d.get("n_p") is not None else None)


def equilibrium_to_dict(eq: Equilibrium) -> dict:
    out: dict = {
        "lambda": eq.lam,
        "Lambda": eq.Lam,
        "family": eq.family.value,
        "stability": eq.stability.value,
    }
    if eq.eigenvalues is not None:
        out["eigenvalues"] = [{"re": z.real, "im": z.imag}
                              for z in eq.eigenvalues]
    else:
        out["eigenvalues"] = None
    out["hamiltonian_extremum"] = eq.hamiltonian_extremum
    return out
