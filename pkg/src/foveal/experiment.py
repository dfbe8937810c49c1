"""Run orchestration: training, evaluation, sweeps, reports, and plots.

train() drives one or more worker loops over the maze simulator, each
collecting n-step rollouts, pushing reward-prediction windows into a
replay ring, and applying combined gradients to a shared ParamStore. A
metrics row is recorded every 1,000 environment steps and written as CSV;
checkpoints embed the full config text so evaluation is self-contained.

evaluate() replays a checkpoint for k episodes under one perturbation
category, with every random stream derived from (seed, episode, stream)
tuples so reports are bit-reproducible. report_table() lays out the
results next to a shipped reference fixture, and plot_metrics() renders
learning curves as a self-contained SVG.
"""

from __future__ import annotations

import json
import threading
import time
from collections import OrderedDict, deque
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .agent import (
    N_ACTIONS,
    RP_WINDOW,
    ParamLayout,
    ParamStore,
    ReplayBuffer,
    Trajectory,
    a3c_loss_and_grad,
    init_params,
    load_checkpoint,
    reward_to_class,
    rp_loss_and_grad,
    sample_rp_batch,
    save_checkpoint,
)
from .config import TrainConfig, dump_config, parse_config
from .foveation import FoveationConfig, preprocess_observation
from .maze import Action, MazeSpec
from .maze import reset as maze_reset
from .maze import step as maze_step
from .perturb import PerturbCategory, perturb_frame
from .saliency import SpectralConfig

METRICS_HEADER = "env_steps,wall_seconds,mean_return,entropy,rp_loss"
METRICS_INTERVAL = 1000
SLIDING_WINDOW = 50


@dataclass(frozen=True)
class MetricsRow:
    env_steps: int
    wall_seconds: float
    mean_return: float
    entropy: float
    rp_loss: float


@dataclass(frozen=True)
class TrainResult:
    out_dir: str
    metrics_path: str
    checkpoint_path: str
    env_steps: int
    wall_seconds: float
    final_mean_return: float
    episodes_completed: int
    skipped_updates: int


@dataclass(frozen=True)
class EvalReport:
    """Scores for k episodes under one perturbation category."""

    category: PerturbCategory
    k: int
    mean: float
    std: float
    returns: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.k < 1 or len(self.returns) != self.k:
            raise ValueError("k must be >= 1 and match the per-game list")
        if self.std < 0.0:
            raise ValueError("std must be >= 0")


class FrameStack:
    """Keeps the last `depth` planes; emits them as one flat vector."""

    def __init__(self, depth: int) -> None:
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self._depth = depth
        self._frames: list[np.ndarray] = []

    def _stacked(self) -> np.ndarray:
        return np.concatenate([f.ravel() for f in self._frames])

    def reset(self, plane: np.ndarray) -> np.ndarray:
        self._frames = [plane] * self._depth
        return self._stacked()

    def push(self, plane: np.ndarray) -> np.ndarray:
        self._frames = self._frames[1:] + [plane]
        return self._stacked()


class Preprocessor:
    """preprocess_observation with an optional memo on repeated frames.

    The maze renders a small set of distinct frames per episode, so keying
    the cache by environment state skips the whole saliency pipeline on
    repeats. Perturbed frames are effectively unique; pass key=None to
    bypass the cache for them.
    """

    def __init__(
        self,
        fovea: FoveationConfig,
        spectral: SpectralConfig,
        out_size: int,
        cache_size: int = 4096,
    ) -> None:
        self._fovea = fovea
        self._spectral = spectral
        self._out_size = out_size
        self._cache: OrderedDict[object, np.ndarray] = OrderedDict()
        self._cache_size = cache_size

    def __call__(self, frame: np.ndarray, key: object = None) -> np.ndarray:
        if key is not None:
            hit = self._cache.get(key)
            if hit is not None:
                return hit
        plane = preprocess_observation(
            frame, self._fovea, self._spectral, out_size=self._out_size
        )
        if key is not None:
            plane.setflags(write=False)
            self._cache[key] = plane
            if len(self._cache) > self._cache_size:
                self._cache.popitem(last=False)
        return plane


def _policy_value(views: dict[str, np.ndarray], x: np.ndarray) -> tuple[np.ndarray, float]:
    h = np.maximum(views["w1"] @ x + views["b1"], 0.0)
    logits = views["wp"] @ h + views["bp"]
    z = logits - logits.max()
    e = np.exp(z)
    pi = e / e.sum()
    value = float(views["wv"][0] @ h + views["bv"][0])
    return pi, value


def _sample_action(rng: np.random.Generator, pi: np.ndarray) -> int:
    u = rng.random()
    idx = int(np.searchsorted(np.cumsum(pi), u, side="right"))
    return min(idx, N_ACTIONS - 1)


def _entropy(pi: np.ndarray) -> float:
    return float(-(pi * np.log(pi)).sum())


def _obs_key(state) -> tuple:  # type: ignore[no-untyped-def]
    return (state.agent_pos, state.apples_remaining)


class _SharedTrainState:
    """Step counter, sliding episode returns, metrics rows, checkpoints."""

    def __init__(self, cfg: TrainConfig, store: ParamStore, out_dir: Path) -> None:
        self.cfg = cfg
        self.store = store
        self.out_dir = out_dir
        self.lock = threading.Lock()
        self.env_steps = 0
        self.episodes_completed = 0
        self.next_boundary = METRICS_INTERVAL
        self.rows: list[MetricsRow] = []
        self.window: deque[float] = deque(maxlen=SLIDING_WINDOW)
        self.t0 = time.perf_counter()

    def budget_left(self) -> bool:
        with self.lock:
            return self.env_steps < self.cfg.total_env_steps

    def note(
        self, steps: int, entropy: float, rp_loss: float, finished: list[float]
    ) -> None:
        with self.lock:
            self.env_steps += steps
            for ret in finished:
                self.window.append(ret)
                self.episodes_completed += 1
            limit = min(self.env_steps, self.cfg.total_env_steps)
            while self.next_boundary <= limit:
                boundary = self.next_boundary
                self.next_boundary += METRICS_INTERVAL
                if self.cfg.virtual_clock:
                    wall = 0.001 * boundary
                else:
                    wall = time.perf_counter() - self.t0
                mean_ret = float(np.mean(self.window)) if self.window else 0.0
                self.rows.append(MetricsRow(boundary, wall, mean_ret, entropy, rp_loss))
                if boundary % self.cfg.checkpoint_every == 0:
                    params, accum = self.store.snapshot()
                    path = self.out_dir / f"ckpt_{boundary:09d}.bin"
                    save_checkpoint(str(path), params, accum, dump_config(self.cfg))

    def sliding_mean(self) -> float:
        with self.lock:
            return float(np.mean(self.window)) if self.window else 0.0


def _worker_loop(wid: int, cfg: TrainConfig, shared: _SharedTrainState) -> None:
    agent_cfg = cfg.agent
    layout = ParamLayout(agent_cfg)
    rng = np.random.default_rng([cfg.seed, wid])
    pre = Preprocessor(cfg.fovea, cfg.spectral, agent_cfg.input_size)
    replay = ReplayBuffer(agent_cfg.replay_capacity, agent_cfg.input_dim)
    stack = FrameStack(agent_cfg.frame_stack)

    episode_idx = 0
    state, frame = maze_reset(cfg.maze, [cfg.seed, wid, episode_idx])
    x = stack.reset(pre(frame, key=_obs_key(state)))
    history: deque[np.ndarray] = deque(maxlen=RP_WINDOW)
    history.append(x)

    while shared.budget_left():
        params = shared.store.read()
        if not np.isfinite(params).all():
            raise ValueError("shared parameters went non-finite")
        views = layout.unpack(params)

        inputs: list[np.ndarray] = []
        actions: list[int] = []
        rewards: list[float] = []
        values: list[float] = []
        ent_sum = 0.0
        done = False
        for _ in range(agent_cfg.rollout_n):
            pi, value = _policy_value(views, x)
            action = _sample_action(rng, pi)
            ent_sum += _entropy(pi)
            state, reward, done, frame = maze_step(cfg.maze, state, Action(action))
            inputs.append(x)
            actions.append(action)
            rewards.append(reward)
            values.append(value)
            if len(history) == RP_WINDOW:
                replay.push(np.stack(history), reward_to_class(reward))
            if done:
                break
            x = stack.push(pre(frame, key=_obs_key(state)))
            history.append(x)

        if done:
            bootstrap = 0.0
        else:
            _, bootstrap = _policy_value(views, x)
        traj = Trajectory(
            inputs=np.stack(inputs),
            actions=np.asarray(actions, dtype=np.int64),
            rewards=np.asarray(rewards, dtype=np.float64),
            values=np.asarray(values, dtype=np.float64),
            bootstrap=bootstrap,
            terminal=done,
        )
        _, grad = a3c_loss_and_grad(params, traj, agent_cfg)
        rp_loss = 0.0
        if len(replay) > 0:
            sample = sample_rp_batch(replay, rng, agent_cfg)
            rp_loss, rp_grad = rp_loss_and_grad(params, sample, agent_cfg)
            grad += rp_grad
        shared.store.apply(grad)

        finished: list[float] = []
        if done:
            finished.append(state.episode_return)
            episode_idx += 1
            state, frame = maze_reset(cfg.maze, [cfg.seed, wid, episode_idx])
            x = stack.reset(pre(frame, key=_obs_key(state)))
            history.clear()
            history.append(x)
        shared.note(len(rewards), ent_sum / max(len(rewards), 1), rp_loss, finished)


def write_metrics_csv(path: str, rows: list[MetricsRow]) -> None:
    lines = [METRICS_HEADER]
    for r in rows:
        lines.append(
            f"{r.env_steps},{r.wall_seconds!r},{r.mean_return!r},{r.entropy!r},{r.rp_loss!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_metrics_csv(path: str) -> list[MetricsRow]:
    """Strict CSV reader; malformed content reports its line number."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0] != METRICS_HEADER:
        raise ValueError(f"{path}:1: expected header {METRICS_HEADER!r}")
    rows: list[MetricsRow] = []
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"{path}:{lineno}: expected 5 fields, got {len(parts)}")
        try:
            rows.append(
                MetricsRow(
                    env_steps=int(parts[0]),
                    wall_seconds=float(parts[1]),
                    mean_return=float(parts[2]),
                    entropy=float(parts[3]),
                    rp_loss=float(parts[4]),
                )
            )
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-numeric field") from None
    return rows


def train(cfg: TrainConfig, out_dir: str | None = None) -> TrainResult:
    """Run one training job and write metrics, checkpoints, and config."""
    if out_dir is not None:
        cfg = replace(cfg, out_dir=out_dir)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(dump_config(cfg), encoding="utf-8")

    params = init_params(cfg.agent, np.random.default_rng(cfg.seed))
    store = ParamStore(params, cfg.agent)
    shared = _SharedTrainState(cfg, store, out)

    if cfg.workers == 1:
        _worker_loop(0, cfg, shared)
    else:
        threads = [
            threading.Thread(target=_worker_loop, args=(wid, cfg, shared), daemon=True)
            for wid in range(cfg.workers)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

    final_params, final_accum = store.snapshot()
    ckpt_path = out / "final.ckpt"
    save_checkpoint(str(ckpt_path), final_params, final_accum, dump_config(cfg))
    metrics_path = out / "metrics.csv"
    write_metrics_csv(str(metrics_path), shared.rows)

    if cfg.virtual_clock:
        wall = 0.001 * shared.env_steps
    else:
        wall = time.perf_counter() - shared.t0
    return TrainResult(
        out_dir=str(out),
        metrics_path=str(metrics_path),
        checkpoint_path=str(ckpt_path),
        env_steps=shared.env_steps,
        wall_seconds=wall,
        final_mean_return=shared.sliding_mean(),
        episodes_completed=shared.episodes_completed,
        skipped_updates=store.skipped_updates,
    )


def random_policy_baseline(
    spec: MazeSpec, episodes: int = 25, seed: int = 0
) -> tuple[float, tuple[float, ...]]:
    """Mean episode return of uniform-random actions; the learning floor."""
    returns: list[float] = []
    for ep in range(episodes):
        state, _ = maze_reset(spec, [seed, ep, 0])
        rng = np.random.default_rng([seed, ep, 1])
        done = False
        while not done:
            action = Action(int(rng.integers(N_ACTIONS)))
            state, _, done, _ = maze_step(spec, state, action)
        returns.append(state.episode_return)
    return float(np.mean(returns)), tuple(returns)


def evaluate(
    checkpoint: str,
    category: PerturbCategory,
    k: int | None = None,
    seed: int = 0,
    greedy: bool | None = None,
) -> EvalReport:
    """Play k episodes from a checkpoint under one perturbation category.

    Frames are perturbed before preprocessing. Streams are derived per
    (seed, episode): 0 seeds the environment, 1 the action sampler, and
    (2, frame_index) the per-frame perturbation, so the report is a pure
    function of (checkpoint, category, k, seed, greedy).
    """
    params, _, cfg_text = load_checkpoint(checkpoint)
    cfg = parse_config(cfg_text)
    agent_cfg = cfg.agent
    layout = ParamLayout(agent_cfg)
    if params.shape != (layout.size,):
        raise ValueError(
            f"checkpoint has {params.size} parameters but its config implies {layout.size}"
        )
    if not np.isfinite(params).all():
        raise ValueError("checkpoint parameters contain non-finite values")
    views = layout.unpack(params)
    if k is None:
        k = cfg.eval_games
    if greedy is None:
        greedy = cfg.eval_greedy
    if k < 1:
        raise ValueError("k must be >= 1")

    pre = Preprocessor(cfg.fovea, cfg.spectral, agent_cfg.input_size)
    cacheable = category is PerturbCategory.NONE
    returns: list[float] = []
    for ep in range(k):
        state, frame = maze_reset(cfg.maze, [seed, ep, 0])
        arng = np.random.default_rng([seed, ep, 1])
        stack = FrameStack(agent_cfg.frame_stack)
        frame_idx = 0

        def shown_frame(frame: np.ndarray) -> np.ndarray:
            if cacheable:
                return frame
            stream = np.random.default_rng([cfg.perturb.seed, seed, ep, 2, frame_idx])
            return perturb_frame(frame, category, cfg.perturb, stream)

        x = stack.reset(pre(shown_frame(frame), key=_obs_key(state) if cacheable else None))
        done = False
        while not done:
            pi, _ = _policy_value(views, x)
            action = int(np.argmax(pi)) if greedy else _sample_action(arng, pi)
            state, _, done, frame = maze_step(cfg.maze, state, Action(action))
            if done:
                break
            frame_idx += 1
            x = stack.push(pre(shown_frame(frame), key=_obs_key(state) if cacheable else None))
        returns.append(state.episode_return)

    arr = np.asarray(returns, dtype=np.float64)
    return EvalReport(
        category=category,
        k=k,
        mean=float(arr.mean()),
        std=float(arr.std()),
        returns=tuple(float(r) for r in returns),
    )


def report_to_json(report: EvalReport, label: str) -> str:
    payload = {
        "label": label,
        "category": report.category.value,
        "k": report.k,
        "mean": report.mean,
        "std": report.std,
        "returns": list(report.returns),
    }
    return json.dumps(payload, indent=2) + "\n"


def report_from_json(text: str) -> tuple[str, EvalReport]:
    payload = json.loads(text)
    report = EvalReport(
        category=PerturbCategory.parse(payload["category"]),
        k=int(payload["k"]),
        mean=float(payload["mean"]),
        std=float(payload["std"]),
        returns=tuple(float(r) for r in payload["returns"]),
    )
    return str(payload.get("label", "run")), report


@dataclass(frozen=True)
class ReferenceScores:
    """Published desk-reference scores for a full-scale navigation agent.

    Eight verbatim "mean (std)" cells: a baseline agent and its
    saliency-foveated variant, each scored on unperturbed frames and the
    three perturbation tiers. Shipped as strings so reports can render
    them exactly as published.
    """

    baseline: tuple[tuple[str, str], ...] = (
        ("testing", "96.92 (8.08)"),
        ("easy", "101.96 (9.656)"),
        ("moderate", "92.64 (12.35)"),
        ("difficult", "39.16 (11.44)"),
    )
    foveated: tuple[tuple[str, str], ...] = (
        ("testing", "95.92 (10.88)"),
        ("easy", "96.96 (9.39)"),
        ("moderate", "83.52 (10.09)"),
        ("difficult", "40.52 (14.67)"),
    )

    def cells(self, agent: str) -> dict[str, str]:
        if agent == "baseline":
            return dict(self.baseline)
        if agent == "foveated":
            return dict(self.foveated)
        raise ValueError(f"unknown reference agent {agent!r}")

    def mean(self, agent: str, category: str) -> float:
        return float(self.cells(agent)[category].split(" ")[0])


REFERENCE_SCORES = ReferenceScores()

_TABLE_CATEGORIES = ("testing", "easy", "moderate", "difficult")


def _category_key(cat: PerturbCategory) -> str:
    return "testing" if cat is PerturbCategory.NONE else cat.value


def report_table(
    reports: dict[str, dict[PerturbCategory, EvalReport]],
    reference: ReferenceScores = REFERENCE_SCORES,
) -> tuple[str, str]:
    """Render rows of mean (std) cells plus the reference fixture.

    Returns (text_table, csv_text). Each agent needs all four categories;
    a trend flag per agent notes whether the difficult score fell below
    the unperturbed one.
    """
    cells: list[tuple[str, dict[str, str]]] = []
    trend: dict[str, bool] = {}
    for label, by_cat in reports.items():
        row: dict[str, str] = {}
        means: dict[str, float] = {}
        for cat_key in _TABLE_CATEGORIES:
            cat = (
                PerturbCategory.NONE
                if cat_key == "testing"
                else PerturbCategory(cat_key)
            )
            if cat not in by_cat:
                raise ValueError(f"agent {label!r} is missing category {cat_key!r}")
            rep = by_cat[cat]
            row[cat_key] = f"{rep.mean:.2f} ({rep.std:.2f})"
            means[cat_key] = rep.mean
        cells.append((label, row))
        trend[label] = means["difficult"] < means["testing"]
    cells.append(("reference: baseline agent", reference.cells("baseline")))
    cells.append(("reference: attentive agent", reference.cells("foveated")))

    name_w = max(len("Agent"), max(len(name) for name, _ in cells))
    col_w = {
        cat: max(len(cat.capitalize()), max(len(row[cat]) for _, row in cells))
        for cat in _TABLE_CATEGORIES
    }
    header = " | ".join(
        ["Agent".ljust(name_w)] + [cat.capitalize().ljust(col_w[cat]) for cat in _TABLE_CATEGORIES]
    )
    rule = "-+-".join(
        ["-" * name_w] + ["-" * col_w[cat] for cat in _TABLE_CATEGORIES]
    )
    lines = [header, rule]
    for name, row in cells:
        lines.append(
            " | ".join(
                [name.ljust(name_w)] + [row[cat].ljust(col_w[cat]) for cat in _TABLE_CATEGORIES]
            )
        )
    for label, flag in trend.items():
        lines.append(f"trend[{label}]: difficult < testing = {str(flag).lower()}")
    text = "\n".join(lines) + "\n"

    csv_lines = ["agent,category,cell"]
    for name, row in cells:
        for cat in _TABLE_CATEGORIES:
            csv_lines.append(f'"{name}",{cat},"{row[cat]}"')
    return text, "\n".join(csv_lines) + "\n"


def alpha_sweep(
    cfg: TrainConfig,
    alphas: list[float],
    out_dir: str,
    repeats: int = 1,
) -> list[tuple[float, int, TrainResult]]:
    """One training run per (alpha, repeat) plus a combined summary CSV."""
    if not alphas:
        raise ValueError("alpha sweep needs at least one alpha")
    if any(not 0.0 <= a <= 1.0 for a in alphas) or repeats < 1:
        raise ValueError("alphas must be in [0, 1] and repeats >= 1")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results: list[tuple[float, int, TrainResult]] = []
    for alpha in alphas:
        for rep in range(repeats):
            run_cfg = replace(
                cfg,
                fovea=replace(cfg.fovea, alpha=alpha, enabled=True),
                seed=cfg.seed + rep,
                out_dir=str(out / f"alpha_{alpha:g}_rep{rep}"),
            )
            results.append((alpha, rep, train(run_cfg)))
    lines = ["alpha,repeat,final_mean_return,env_steps,metrics_csv"]
    for alpha, rep, res in results:
        lines.append(
            f"{alpha:g},{rep},{res.final_mean_return!r},{res.env_steps},{res.metrics_path}"
        )
    (out / "summary.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return results


_PLOT_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _svg_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def plot_metrics(
    csv_paths: list[str], out_path: str, labels: list[str] | None = None
) -> None:
    """Learning curves (env_steps vs mean_return) as one SVG file."""
    if not csv_paths:
        raise ValueError("need at least one metrics CSV")
    if labels is not None and len(labels) != len(csv_paths):
        raise ValueError("labels must match csv paths one to one")
    series: list[tuple[str, list[MetricsRow]]] = []
    for i, path in enumerate(csv_paths):
        rows = read_metrics_csv(path)
        if labels is not None:
            name = labels[i]
        else:
            parent = Path(path).resolve().parent.name
            name = parent if parent else Path(path).stem
        series.append((name, rows))

    width, height = 800.0, 500.0
    ml, mr, mt, mb = 70.0, 170.0, 20.0, 50.0
    px0, px1 = ml, width - mr
    py0, py1 = height - mb, mt

    all_rows = [r for _, rows in series for r in rows]
    if all_rows:
        x_hi = max(r.env_steps for r in all_rows)
        x_lo = 0.0
        y_lo = min(r.mean_return for r in all_rows)
        y_hi = max(r.mean_return for r in all_rows)
        if y_hi == y_lo:
            y_hi = y_lo + 1.0
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad
        if x_hi == 0:
            x_hi = 1.0
    else:
        x_lo, x_hi, y_lo, y_hi = 0.0, 1.0, 0.0, 1.0

    def sx(v: float) -> float:
        return px0 + (v - x_lo) / (x_hi - x_lo) * (px1 - px0)

    def sy(v: float) -> float:
        return py0 - (v - y_lo) / (y_hi - y_lo) * (py0 - py1)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}">',
        f'<rect width="{width:g}" height="{height:g}" fill="white"/>',
        f'<line x1="{px0:g}" y1="{py0:g}" x2="{px1:g}" y2="{py0:g}" stroke="black"/>',
        f'<line x1="{px0:g}" y1="{py0:g}" x2="{px0:g}" y2="{py1:g}" stroke="black"/>',
    ]
    for tv in _svg_ticks(x_lo, x_hi):
        x = sx(tv)
        parts.append(f'<line x1="{x:.2f}" y1="{py0:g}" x2="{x:.2f}" y2="{py0 + 5:g}" stroke="black"/>')
        parts.append(
            f'<text x="{x:.2f}" y="{py0 + 20:g}" font-size="11" text-anchor="middle">{tv:g}</text>'
        )
    for tv in _svg_ticks(y_lo, y_hi):
        y = sy(tv)
        parts.append(f'<line x1="{px0 - 5:g}" y1="{y:.2f}" x2="{px0:g}" y2="{y:.2f}" stroke="black"/>')
        parts.append(
            f'<text x="{px0 - 8:g}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{tv:.4g}</text>'
        )
    parts.append(
        f'<text x="{(px0 + px1) / 2:g}" y="{height - 12:g}" font-size="12" '
        f'text-anchor="middle">environment steps</text>'
    )
    parts.append(
        f'<text x="16" y="{(py0 + py1) / 2:g}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {(py0 + py1) / 2:g})">mean return (sliding)</text>'
    )
    for i, (name, rows) in enumerate(series):
        color = _PLOT_COLORS[i % len(_PLOT_COLORS)]
        if rows:
            points = " ".join(f"{sx(r.env_steps):.2f},{sy(r.mean_return):.2f}" for r in rows)
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
            )
        ly = mt + 16 + 18 * i
        parts.append(
            f'<line x1="{px1 + 10:g}" y1="{ly:g}" x2="{px1 + 34:g}" y2="{ly:g}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{px1 + 40:g}" y="{ly + 4:g}" font-size="11">{name}</text>')
    parts.append("</svg>")
    Path(out_path).write_text("\n".join(parts) + "\n", encoding="utf-8")
