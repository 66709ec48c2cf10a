"""Per-round numeric kernels.

Each kernel has a numba ``@njit`` loop version and a vectorised numpy
version. The two produce bit-identical results: every per-node quantity is a
single expression evaluated in the same operand order on both paths.

Set ``REECHSIM_DISABLE_NUMBA=1`` (or run without numba installed) to use the
numpy path.
"""
from __future__ import annotations

import os

import numpy as np

SINK = -1
NO_DEST = -2

ROLE_DEAD = -1
ROLE_NORMAL = 0
ROLE_HEAD = 1
ROLE_DIRECT = 2


def _numba_disabled() -> bool:
    return os.environ.get("REECHSIM_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None


# ---------------------------------------------------------------- numpy path

def _tx_np(d, bits, e_elec, eps_fs, eps_mp, d0):
    d2 = d * d
    return np.where(d < d0, e_elec * bits + eps_fs * bits * d2, e_elec * bits + eps_mp * bits * (d2 * d2))


def round_debits_numpy(x, y, dest, role, sink_x, sink_y, e_elec, eps_fs, eps_mp, d0, e_da, bits):
    n = x.shape[0]
    debits = np.zeros(n)
    members = np.flatnonzero(role == ROLE_NORMAL)
    heads = role == ROLE_HEAD
    senders = np.flatnonzero(heads | (role == ROLE_DIRECT))

    if members.size:
        tgt = dest[members]
        dx = x[members] - x[tgt]
        dy = y[members] - y[tgt]
        debits[members] = _tx_np(np.sqrt(dx * dx + dy * dy), bits, e_elec, eps_fs, eps_mp, d0)
    counts = np.bincount(dest[members], minlength=n) if members.size else np.zeros(n, dtype=np.int64)

    dx = x[senders] - sink_x
    dy = y[senders] - sink_y
    to_sink = _tx_np(np.sqrt(dx * dx + dy * dy), bits, e_elec, eps_fs, eps_mp, d0)
    c = counts[senders]
    head_cost = c * (e_elec * bits) + e_da * bits * (c + 1) + to_sink
    debits[senders] = np.where(heads[senders], head_cost, to_sink)
    return debits


def nearest_heads_numpy(x, y, member_idx, head_idx):
    """For each member, the head closest to it (lowest position in ``head_idx`` on ties)."""
    if head_idx.size == 0:
        return np.full(member_idx.size, SINK, dtype=np.int64)
    dx = x[member_idx][:, None] - x[head_idx][None, :]
    dy = y[member_idx][:, None] - y[head_idx][None, :]
    return head_idx[np.argmin(dx * dx + dy * dy, axis=1)].astype(np.int64)


def apply_debits_numpy(energy, debits):
    """Subtract debits in place, clamping at zero; returns energy actually removed."""
    before = energy.copy()
    after = energy - debits
    after[after <= 0.0] = 0.0
    energy[:] = after
    return before - after


# ---------------------------------------------------------------- numba path

if numba is not None:

    @numba.njit(cache=True)
    def _tx_nb(d, bits, e_elec, eps_fs, eps_mp, d0):
        d2 = d * d
        if d < d0:
            return e_elec * bits + eps_fs * bits * d2
        return e_elec * bits + eps_mp * bits * (d2 * d2)

    @numba.njit(cache=True)
    def round_debits_numba(x, y, dest, role, sink_x, sink_y, e_elec, eps_fs, eps_mp, d0, e_da, bits):
        n = x.shape[0]
        debits = np.zeros(n)
        counts = np.zeros(n, dtype=np.int64)
        for i in range(n):
            if role[i] == ROLE_NORMAL:
                j = dest[i]
                dx = x[i] - x[j]
                dy = y[i] - y[j]
                debits[i] = _tx_nb(np.sqrt(dx * dx + dy * dy), bits, e_elec, eps_fs, eps_mp, d0)
                counts[j] += 1
        for i in range(n):
            r = role[i]
            if r == ROLE_HEAD or r == ROLE_DIRECT:
                dx = x[i] - sink_x
                dy = y[i] - sink_y
                to_sink = _tx_nb(np.sqrt(dx * dx + dy * dy), bits, e_elec, eps_fs, eps_mp, d0)
                if r == ROLE_HEAD:
                    c = counts[i]
                    debits[i] = c * (e_elec * bits) + e_da * bits * (c + 1) + to_sink
                else:
                    debits[i] = to_sink
        return debits

    @numba.njit(cache=True)
    def nearest_heads_numba(x, y, member_idx, head_idx):
        out = np.empty(member_idx.shape[0], dtype=np.int64)
        for a in range(member_idx.shape[0]):
            i = member_idx[a]
            if head_idx.shape[0] == 0:
                out[a] = SINK
                continue
            best = -1
            best_d2 = np.inf
            for b in range(head_idx.shape[0]):
                j = head_idx[b]
                dx = x[i] - x[j]
                dy = y[i] - y[j]
                d2 = dx * dx + dy * dy
                if d2 < best_d2:
                    best_d2 = d2
                    best = j
            out[a] = best
        return out

    @numba.njit(cache=True)
    def apply_debits_numba(energy, debits):
        removed = np.empty_like(energy)
        for i in range(energy.shape[0]):
            before = energy[i]
            after = before - debits[i]
            if after <= 0.0:
                after = 0.0
            energy[i] = after
            removed[i] = before - after
        return removed

else:  # pragma: no cover
    round_debits_numba = nearest_heads_numba = apply_debits_numba = None


def select_backend(name: str | None = None):
    """Return ``(round_debits, nearest_heads, apply_debits)`` for ``name``.

    ``name`` is ``"numba"``, ``"numpy"`` or ``None`` (environment default).
    """
    if name is None:
        name = "numpy" if (numba is None or _numba_disabled()) else "numba"
    if name == "numba":
        if numba is None:
            raise RuntimeError("numba backend requested but numba is not installed")
        return round_debits_numba, nearest_heads_numba, apply_debits_numba
    if name == "numpy":
        return round_debits_numpy, nearest_heads_numpy, apply_debits_numpy
    raise ValueError(f"unknown backend {name!r}")


BACKEND = "numpy" if (numba is None or _numba_disabled()) else "numba"
