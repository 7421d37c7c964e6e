"""Hand-rolled LSTM: single cell step plus batched sequence passes.

Everything is float64 numpy. Weight layout per gate g in {i, f, o, c}:
input weights w_g (hidden, input), recurrent weights u_g (hidden, hidden),
bias b_g (hidden,). Pre-activation for a batch row x with state h is
x @ w_g.T + h @ u_g.T + b_g.

Padded time steps (mask False) are carried through unchanged: the state
simply skips them, in both the forward pass and backpropagation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GATE_NAMES = ("i", "f", "o", "c")


@dataclass
class LstmParams:
    w_i: np.ndarray
    w_f: np.ndarray
    w_o: np.ndarray
    w_c: np.ndarray
    u_i: np.ndarray
    u_f: np.ndarray
    u_o: np.ndarray
    u_c: np.ndarray
    b_i: np.ndarray
    b_f: np.ndarray
    b_o: np.ndarray
    b_c: np.ndarray

    def __post_init__(self) -> None:
        h, d = self.w_i.shape
        for g in GATE_NAMES:
            w, u, b = getattr(self, f"w_{g}"), getattr(self, f"u_{g}"), getattr(self, f"b_{g}")
            if w.shape != (h, d) or u.shape != (h, h) or b.shape != (h,):
                raise ValueError(f"inconsistent shapes in gate {g!r}")
            for a in (w, u, b):
                if not np.all(np.isfinite(a)):
                    raise ValueError(f"non-finite values in gate {g!r}")

    @property
    def hidden_size(self) -> int:
        return self.w_i.shape[0]

    @property
    def input_size(self) -> int:
        return self.w_i.shape[1]

    @classmethod
    def zeros(cls, hidden: int, input_dim: int) -> "LstmParams":
        kw = {}
        for g in GATE_NAMES:
            kw[f"w_{g}"] = np.zeros((hidden, input_dim))
            kw[f"u_{g}"] = np.zeros((hidden, hidden))
            kw[f"b_{g}"] = np.zeros(hidden)
        return cls(**kw)

    @classmethod
    def init(cls, rng: np.random.Generator, hidden: int, input_dim: int) -> "LstmParams":
        """Glorot-uniform weights, zero biases except forget bias 1."""
        kw = {}
        s_w = np.sqrt(6.0 / (input_dim + hidden))
        s_u = np.sqrt(6.0 / (2 * hidden))
        for g in GATE_NAMES:
            kw[f"w_{g}"] = rng.uniform(-s_w, s_w, size=(hidden, input_dim))
            kw[f"u_{g}"] = rng.uniform(-s_u, s_u, size=(hidden, hidden))
            kw[f"b_{g}"] = np.zeros(hidden)
        kw["b_f"] = np.ones(hidden)
        return cls(**kw)

    def as_dict(self, prefix: str) -> dict[str, np.ndarray]:
        out = {}
        for g in GATE_NAMES:
            for kind in ("w", "u", "b"):
                out[f"{prefix}.{kind}_{g}"] = getattr(self, f"{kind}_{g}")
        return out


@dataclass
class LstmState:
    h: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        if self.h.shape != self.c.shape:
            raise ValueError("h and c must have the same shape")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def lstm_cell_forward(x: np.ndarray, prev: LstmState, p: LstmParams) -> LstmState:
    """One LSTM step for a single input vector.

    i, f, o = sigmoid(w x + u h + b); g = tanh(w x + u h + b);
    c' = f*c + i*g; h' = o*tanh(c').
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (p.input_size,):
        raise ValueError(f"input shape {x.shape}, expected ({p.input_size},)")
    if prev.h.shape != (p.hidden_size,):
        raise ValueError(f"state shape {prev.h.shape}, expected ({p.hidden_size},)")
    i = _sigmoid(p.w_i @ x + p.u_i @ prev.h + p.b_i)
    f = _sigmoid(p.w_f @ x + p.u_f @ prev.h + p.b_f)
    o = _sigmoid(p.w_o @ x + p.u_o @ prev.h + p.b_o)
    g = np.tanh(p.w_c @ x + p.u_c @ prev.h + p.b_c)
    c = f * prev.c + i * g
    h = o * np.tanh(c)
    return LstmState(h=h, c=c)


def lstm_sequence_forward(
    x: np.ndarray, mask: np.ndarray, p: LstmParams, reverse: bool = False
) -> tuple[np.ndarray, dict]:
    """Run a batch of padded sequences through one direction.

    x is (batch, time, input), mask (batch, time) with False on padding.
    Returns the final hidden state (batch, hidden) and a cache for
    lstm_sequence_backward. reverse=True walks time from the end, which
    on right-padded input equals running the reversed raw sequence.
    """
    b, t_max, _ = x.shape
    hs = p.hidden_size
    h = np.zeros((b, hs))
    c = np.zeros((b, hs))
    order = range(t_max - 1, -1, -1) if reverse else range(t_max)
    steps = []
    for t in order:
        xt = x[:, t, :]
        m = mask[:, t].astype(np.float64)[:, None]
        i = _sigmoid(xt @ p.w_i.T + h @ p.u_i.T + p.b_i)
        f = _sigmoid(xt @ p.w_f.T + h @ p.u_f.T + p.b_f)
        o = _sigmoid(xt @ p.w_o.T + h @ p.u_o.T + p.b_o)
        g = np.tanh(xt @ p.w_c.T + h @ p.u_c.T + p.b_c)
        c_new = f * c + i * g
        tanh_c = np.tanh(c_new)
        h_new = o * tanh_c
        steps.append((t, xt, h, c, i, f, o, g, tanh_c, m))
        h = m * h_new + (1.0 - m) * h
        c = m * c_new + (1.0 - m) * c
    cache = {"params": p, "steps": steps, "shape": x.shape}
    return h, cache


def lstm_sequence_backward(
    dh_final: np.ndarray, cache: dict
) -> tuple[dict[str, np.ndarray], np.ndarray]:
    """Backpropagate through time from a gradient on the final hidden state.

    Returns gradients keyed like LstmParams.as_dict("") without the
    prefix dot (e.g. "w_i"), plus dL/dx of shape (batch, time, input).
    """
    p: LstmParams = cache["params"]
    dx = np.zeros(cache["shape"])
    grads = {f"{kind}_{g}": np.zeros_like(getattr(p, f"{kind}_{g}"))
             for g in GATE_NAMES for kind in ("w", "u", "b")}
    dh = dh_final.copy()
    dc = np.zeros_like(dh)
    for t, xt, h_prev, c_prev, i, f, o, g, tanh_c, m in reversed(cache["steps"]):
        dh_new = dh * m
        dc_carry = dc * (1.0 - m)
        do = dh_new * tanh_c
        dct = dc * m + dh_new * o * (1.0 - tanh_c**2)
        di = dct * g
        df = dct * c_prev
        dg = dct * i
        da_i = di * i * (1.0 - i)
        da_f = df * f * (1.0 - f)
        da_o = do * o * (1.0 - o)
        da_g = dg * (1.0 - g**2)
        grads["w_i"] += da_i.T @ xt
        grads["w_f"] += da_f.T @ xt
        grads["w_o"] += da_o.T @ xt
        grads["w_c"] += da_g.T @ xt
        grads["u_i"] += da_i.T @ h_prev
        grads["u_f"] += da_f.T @ h_prev
        grads["u_o"] += da_o.T @ h_prev
        grads["u_c"] += da_g.T @ h_prev
        grads["b_i"] += da_i.sum(axis=0)
        grads["b_f"] += da_f.sum(axis=0)
        grads["b_o"] += da_o.sum(axis=0)
        grads["b_c"] += da_g.sum(axis=0)
        dx[:, t, :] = da_i @ p.w_i + da_f @ p.w_f + da_o @ p.w_o + da_g @ p.w_c
        dh = da_i @ p.u_i + da_f @ p.u_f + da_o @ p.u_o + da_g @ p.u_c + dh * (1.0 - m)
        dc = dct * f + dc_carry
    return grads, dx
