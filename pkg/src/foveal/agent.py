"""Small actor-critic learner with a reward-prediction side task.

The network is a single-hidden-layer MLP over a stack of small gray
planes: shared encoder, a 4-way policy head, a scalar value head, and a
3-class head that predicts the sign of the reward following a 3-step
window of inputs. All gradients are derived by hand and checked against
finite differences in the tests, so everything runs in float64.

Updates follow the usual n-step advantage recipe: discounted returns
bootstrapped from the critic, policy gradient weighted by the advantage
over the rollout-time value baseline, an entropy bonus, and a
squared-error value term. Parameters live in one flat vector; a
ParamStore serializes concurrent updates from worker threads with a
whole-vector lock.
"""

from __future__ import annotations

import struct
import threading
from dataclasses import dataclass

import numpy as np

N_ACTIONS = 4
RP_WINDOW = 3
RP_CLASSES = 3

CKPT_MAGIC = b"FOVEALCKPT"
CKPT_VERSION = 1


@dataclass(frozen=True)
class AgentConfig:
    """Learner hyperparameters; defaults are the package's trained setup."""

    gamma: float = 0.99
    rollout_n: int = 20
    entropy_beta: float = 0.01
    value_coef: float = 0.5
    lr: float = 7e-4
    rmsprop_decay: float = 0.99
    rmsprop_epsilon: float = 0.1
    frame_stack: int = 4
    rp_skew: float = 0.5
    replay_capacity: int = 2000
    input_size: int = 21
    hidden_units: int = 64

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must be in (0, 1]")
        if self.rollout_n < 1:
            raise ValueError("rollout_n must be >= 1")
        if not 0.0 <= self.rp_skew <= 1.0:
            raise ValueError("rp_skew must be in [0, 1]")
        if self.frame_stack < 1 or self.input_size < 1 or self.hidden_units < 1:
            raise ValueError("frame_stack, input_size, hidden_units must be >= 1")
        if self.replay_capacity < 1:
            raise ValueError("replay_capacity must be >= 1")
        if self.lr < 0.0 or not 0.0 <= self.rmsprop_decay < 1.0 or self.rmsprop_epsilon <= 0.0:
            raise ValueError("bad optimizer settings")

    @property
    def input_dim(self) -> int:
        return self.input_size * self.input_size * self.frame_stack


class ParamLayout:
    """Names, shapes, and offsets of the blocks inside the flat vector."""

    def __init__(self, cfg: AgentConfig) -> None:
        d, h = cfg.input_dim, cfg.hidden_units
        shapes = [
            ("w1", (h, d)),
            ("b1", (h,)),
            ("wp", (N_ACTIONS, h)),
            ("bp", (N_ACTIONS,)),
            ("wv", (1, h)),
            ("bv", (1,)),
            ("wr", (RP_CLASSES, RP_WINDOW * h)),
            ("br", (RP_CLASSES,)),
        ]
        self.shapes = dict(shapes)
        self.slices: dict[str, slice] = {}
        offset = 0
        for name, shape in shapes:
            count = int(np.prod(shape))
            self.slices[name] = slice(offset, offset + count)
            offset += count
        self.size = offset

    def view(self, params: np.ndarray, name: str) -> np.ndarray:
        return params[self.slices[name]].reshape(self.shapes[name])

    def unpack(self, params: np.ndarray) -> dict[str, np.ndarray]:
        if params.shape != (self.size,):
            raise ValueError(f"params must have shape ({self.size},), got {params.shape}")
        return {name: self.view(params, name) for name in self.shapes}


def init_params(cfg: AgentConfig, rng: np.random.Generator) -> np.ndarray:
    """Scaled-normal weights, zero biases, as one flat float64 vector."""
    layout = ParamLayout(cfg)
    params = np.zeros(layout.size, dtype=np.float64)
    d, h = cfg.input_dim, cfg.hidden_units
    layout.view(params, "w1")[:] = rng.normal(0.0, np.sqrt(2.0 / d), size=(h, d))
    layout.view(params, "wp")[:] = rng.normal(0.0, np.sqrt(1.0 / h), size=(N_ACTIONS, h))
    layout.view(params, "wv")[:] = rng.normal(0.0, np.sqrt(1.0 / h), size=(1, h))
    layout.view(params, "wr")[:] = rng.normal(
        0.0, np.sqrt(1.0 / (RP_WINDOW * h)), size=(RP_CLASSES, RP_WINDOW * h)
    )
    return params


def _softmax_rows(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _log_softmax_rows(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def _hidden(p: dict[str, np.ndarray], x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pre = x @ p["w1"].T + p["b1"]
    return pre, np.maximum(pre, 0.0)


def forward(
    params: np.ndarray, x: np.ndarray, cfg: AgentConfig
) -> tuple[np.ndarray, float]:
    """Policy distribution and value estimate for one stacked input."""
    if not np.isfinite(params).all():
        raise ValueError("parameters contain non-finite values")
    layout = ParamLayout(cfg)
    p = layout.unpack(np.asarray(params, dtype=np.float64))
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape[0] != cfg.input_dim:
        raise ValueError(f"input must have {cfg.input_dim} samples, got {x.shape[0]}")
    _, h = _hidden(p, x)
    policy = _softmax_rows(h @ p["wp"].T + p["bp"])
    value = float((h @ p["wv"].T)[0] + p["bv"][0])
    return policy, value


@dataclass(frozen=True)
class Trajectory:
    """A contiguous run of steps plus the critic bootstrap past its end.

    values holds the critic's estimate for each step, recorded when the
    step was taken. The policy-gradient baseline uses these stored
    numbers rather than re-evaluating the critic, so the loss treats
    them as constants.
    """

    inputs: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    values: np.ndarray
    bootstrap: float
    terminal: bool = False

    def __post_init__(self) -> None:
        t = len(self.rewards)
        if t < 1:
            raise ValueError("trajectory must contain at least one step")
        if self.inputs.shape[0] != t or self.actions.shape[0] != t:
            raise ValueError("inputs, actions, rewards must share their leading length")
        if self.values.shape != (t,):
            raise ValueError("values must hold one critic estimate per step")
        if self.terminal and self.bootstrap != 0.0:
            raise ValueError("terminal trajectories must have bootstrap 0")


def n_step_returns(rewards: np.ndarray, bootstrap: float, gamma: float) -> np.ndarray:
    """Discounted returns-to-go: R_t = r_t + gamma * R_{t+1}."""
    r = np.asarray(rewards, dtype=np.float64)
    if r.ndim != 1 or len(r) < 1:
        raise ValueError("rewards must be a nonempty 1-D sequence")
    out = np.empty_like(r)
    acc = float(bootstrap)
    for t in range(len(r) - 1, -1, -1):
        acc = r[t] + gamma * acc
        out[t] = acc
    return out


def a3c_loss_and_grad(
    params: np.ndarray, traj: Trajectory, cfg: AgentConfig
) -> tuple[float, np.ndarray]:
    """Summed actor-critic loss over a rollout and its exact gradient.

    loss = sum_t [ -log pi(a_t) * (R_t - values_t)
                   - entropy_beta * H(pi_t)
                   + value_coef * (R_t - V_t)^2 ]

    The baseline in the policy term is the stored rollout-time estimate
    (plain data), while the squared error trains the live critic V. With
    that split the loss is an ordinary function of params and the
    returned gradient is exactly its derivative; workers call this with
    the same parameter snapshot the rollout used, where values_t equals
    V(s_t) anyway.
    """
    layout = ParamLayout(cfg)
    p = layout.unpack(np.asarray(params, dtype=np.float64))
    x = np.asarray(traj.inputs, dtype=np.float64)
    t_len = x.shape[0]

    pre, h = _hidden(p, x)
    logits = h @ p["wp"].T + p["bp"]
    logp = _log_softmax_rows(logits)
    pi = np.exp(logp)
    v = (h @ p["wv"].T)[:, 0] + p["bv"][0]

    returns = n_step_returns(traj.rewards, traj.bootstrap, cfg.gamma)
    adv = returns - np.asarray(traj.values, dtype=np.float64)
    entropy = -(pi * logp).sum(axis=1)
    chosen = logp[np.arange(t_len), traj.actions]
    loss = float(
        -(chosen * adv).sum()
        - cfg.entropy_beta * entropy.sum()
        + cfg.value_coef * ((returns - v) ** 2).sum()
    )
    if not np.isfinite(loss):
        raise ValueError("actor-critic loss is non-finite")

    # Backward pass. adv is data, so the value head only receives the
    # squared-error signal.
    one_hot = np.zeros_like(pi)
    one_hot[np.arange(t_len), traj.actions] = 1.0
    dlogits = (pi - one_hot) * adv[:, None]
    dlogits += cfg.entropy_beta * pi * (logp + entropy[:, None])
    dv = -2.0 * cfg.value_coef * (returns - v)

    dh = dlogits @ p["wp"] + np.outer(dv, p["wv"][0])
    dpre = dh * (pre > 0.0)

    grad = np.zeros(layout.size, dtype=np.float64)
    layout.view(grad, "w1")[:] = dpre.T @ x
    layout.view(grad, "b1")[:] = dpre.sum(axis=0)
    layout.view(grad, "wp")[:] = dlogits.T @ h
    layout.view(grad, "bp")[:] = dlogits.sum(axis=0)
    layout.view(grad, "wv")[:] = (dv @ h)[None, :]
    layout.view(grad, "bv")[:] = dv.sum()
    return loss, grad


@dataclass(frozen=True)
class RPSample:
    """Three consecutive stacked inputs plus the sign class that follows."""

    window: np.ndarray
    label: int

    def __post_init__(self) -> None:
        if self.window.ndim != 2 or self.window.shape[0] != RP_WINDOW:
            raise ValueError(f"window must be ({RP_WINDOW}, input_dim)")
        if not 0 <= self.label < RP_CLASSES:
            raise ValueError(f"label must be in [0, {RP_CLASSES})")


def reward_to_class(reward: float) -> int:
    """Sign classes: 0 negative, 1 zero, 2 positive."""
    if reward < 0.0:
        return 0
    if reward > 0.0:
        return 2
    return 1


def rp_loss_and_grad(
    params: np.ndarray, sample: RPSample, cfg: AgentConfig
) -> tuple[float, np.ndarray]:
    """Cross-entropy of the reward-sign prediction and its exact gradient."""
    layout = ParamLayout(cfg)
    p = layout.unpack(np.asarray(params, dtype=np.float64))
    w = np.asarray(sample.window, dtype=np.float64)
    if w.shape != (RP_WINDOW, cfg.input_dim):
        raise ValueError(f"window must be ({RP_WINDOW}, {cfg.input_dim}), got {w.shape}")

    pre, h = _hidden(p, w)
    z = h.reshape(-1)
    logits = p["wr"] @ z + p["br"]
    logp = _log_softmax_rows(logits)
    loss = float(-logp[sample.label])
    if not np.isfinite(loss):
        raise ValueError("reward-prediction loss is non-finite")

    dlogits = np.exp(logp)
    dlogits[sample.label] -= 1.0
    dz = p["wr"].T @ dlogits
    dpre = dz.reshape(RP_WINDOW, -1) * (pre > 0.0)

    grad = np.zeros(layout.size, dtype=np.float64)
    layout.view(grad, "w1")[:] = dpre.T @ w
    layout.view(grad, "b1")[:] = dpre.sum(axis=0)
    layout.view(grad, "wr")[:] = np.outer(dlogits, z)
    layout.view(grad, "br")[:] = dlogits
    return loss, grad


class ReplayBuffer:
    """Fixed-capacity ring of reward-prediction windows."""

    def __init__(self, capacity: int, input_dim: int) -> None:
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self._windows = np.zeros((capacity, RP_WINDOW, input_dim), dtype=np.float32)
        self._labels = np.zeros(capacity, dtype=np.int8)
        self._next = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    @property
    def capacity(self) -> int:
        return self._windows.shape[0]

    def push(self, window: np.ndarray, label: int) -> None:
        w = np.asarray(window, dtype=np.float32)
        if w.shape != self._windows.shape[1:]:
            raise ValueError(f"window must have shape {self._windows.shape[1:]}, got {w.shape}")
        if not 0 <= label < RP_CLASSES:
            raise ValueError("bad label")
        self._windows[self._next] = w
        self._labels[self._next] = label
        self._next = (self._next + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def _indices_by_kind(self) -> tuple[np.ndarray, np.ndarray]:
        labels = self._labels[: self._size]
        rewarding = np.flatnonzero(labels != 1)
        zero = np.flatnonzero(labels == 1)
        return rewarding, zero

    def sample(self, rng: np.random.Generator, rp_skew: float) -> RPSample:
        if self._size == 0:
            raise ValueError("cannot sample from an empty replay buffer")
        rewarding, zero = self._indices_by_kind()
        want_rewarding = rng.random() < rp_skew
        pool = rewarding if want_rewarding else zero
        if len(pool) == 0:
            pool = zero if want_rewarding else rewarding
        idx = int(pool[int(rng.integers(len(pool)))])
        return RPSample(
            window=self._windows[idx].astype(np.float64), label=int(self._labels[idx])
        )


def sample_rp_batch(
    buffer: ReplayBuffer, rng: np.random.Generator, cfg: AgentConfig
) -> RPSample:
    """Skewed draw: prefer reward-bearing windows with probability rp_skew."""
    return buffer.sample(rng, cfg.rp_skew)


class ParamStore:
    """Shared parameter vector plus optimizer state, updated under a lock.

    Workers snapshot with read() and push gradients through apply(); each
    apply is a single RMSProp-style step over the whole vector, so
    concurrent updates interleave without losing writes. Non-finite
    gradients are dropped and counted instead of applied.
    """

    def __init__(self, params: np.ndarray, cfg: AgentConfig) -> None:
        self._params = np.array(params, dtype=np.float64)
        self._accum = np.zeros_like(self._params)
        self._cfg = cfg
        self._lock = threading.Lock()
        self.skipped_updates = 0

    def read(self) -> np.ndarray:
        with self._lock:
            return self._params.copy()

    def snapshot(self) -> tuple[np.ndarray, np.ndarray]:
        with self._lock:
            return self._params.copy(), self._accum.copy()

    def restore(self, params: np.ndarray, accum: np.ndarray) -> None:
        with self._lock:
            if params.shape != self._params.shape or accum.shape != self._accum.shape:
                raise ValueError("restore shapes do not match the store")
            self._params[:] = params
            self._accum[:] = accum

    def apply(self, grad: np.ndarray) -> bool:
        g = np.asarray(grad, dtype=np.float64)
        if g.shape != self._params.shape:
            raise ValueError("gradient shape does not match the store")
        with self._lock:
            if not np.isfinite(g).all():
                self.skipped_updates += 1
                return False
            cfg = self._cfg
            self._accum *= cfg.rmsprop_decay
            self._accum += (1.0 - cfg.rmsprop_decay) * g * g
            self._params -= cfg.lr * g / np.sqrt(self._accum + cfg.rmsprop_epsilon)
            return True


def apply_gradients(store: ParamStore, grad: np.ndarray) -> bool:
    """One shared-store update; returns False when the gradient was dropped."""
    return store.apply(grad)


def save_checkpoint(
    path: str, params: np.ndarray, accum: np.ndarray, config_text: str
) -> None:
    """Versioned binary checkpoint: config echo plus float64 LE vectors."""
    params = np.ascontiguousarray(params, dtype="<f8")
    accum = np.ascontiguousarray(accum, dtype="<f8")
    blob = config_text.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(CKPT_MAGIC)
        fh.write(struct.pack("<I", CKPT_VERSION))
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(struct.pack("<Q", params.size))
        fh.write(params.tobytes())
        fh.write(struct.pack("<Q", accum.size))
        fh.write(accum.tobytes())


def load_checkpoint(path: str) -> tuple[np.ndarray, np.ndarray, str]:
    """Read back (params, accum, config_text); validates magic and sizes."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[: len(CKPT_MAGIC)] != CKPT_MAGIC:
        raise ValueError("not a checkpoint file (bad magic)")
    off = len(CKPT_MAGIC)
    (version,) = struct.unpack_from("<I", raw, off)
    off += 4
    if version != CKPT_VERSION:
        raise ValueError(f"unsupported checkpoint version {version}")
    (cfg_len,) = struct.unpack_from("<I", raw, off)
    off += 4
    config_text = raw[off : off + cfg_len].decode("utf-8")
    off += cfg_len
    (n_params,) = struct.unpack_from("<Q", raw, off)
    off += 8
    params = np.frombuffer(raw, dtype="<f8", count=n_params, offset=off).copy()
    off += 8 * n_params
    (n_accum,) = struct.unpack_from("<Q", raw, off)
    off += 8
    accum = np.frombuffer(raw, dtype="<f8", count=n_accum, offset=off).copy()
    off += 8 * n_accum
    if off != len(raw):
        raise ValueError("checkpoint has trailing or missing bytes")
    return params, accum, config_text
