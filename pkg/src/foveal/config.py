"""Flat text configuration for training and evaluation runs.

Files are plain `key = value` lines, one setting each; `#` starts a
comment. Keys are namespaced by component (`agent.gamma`, `fovea.alpha`,
`spectral.working_size`, `perturb.noise_sigma`, `maze.grid`,
`train.seed`, `eval.games`). Unknown keys are errors, not warnings, so a
typo cannot silently fall back to a default.

The maze comes either inline (`maze.grid`, rows separated by `/`) or from
a grid file (`maze.file`); dumps always inline the grid so a dumped config
is self-contained, which is what checkpoint files embed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .agent import AgentConfig
from .foveation import FoveationConfig
from .maze import DEFAULT_MAZE_TEXT, MazeSpec, parse_maze
from .perturb import PerturbConfig
from .saliency import SpectralConfig


@dataclass(frozen=True)
class TrainConfig:
    """Everything one run needs: components plus run-control settings."""

    maze: MazeSpec
    agent: AgentConfig
    fovea: FoveationConfig
    spectral: SpectralConfig
    perturb: PerturbConfig
    total_env_steps: int = 500_000
    workers: int = 1
    seed: int = 0
    out_dir: str = "runs/run"
    checkpoint_every: int = 100_000
    virtual_clock: bool = False
    eval_games: int = 25
    eval_greedy: bool = False

    def __post_init__(self) -> None:
        if self.total_env_steps < 0:
            raise ValueError("train.total_env_steps must be >= 0")
        if self.workers < 1:
            raise ValueError("train.workers must be >= 1")
        if self.checkpoint_every < 1:
            raise ValueError("train.checkpoint_every must be >= 1")
        if self.eval_games < 1:
            raise ValueError("eval.games must be >= 1")


def default_config() -> TrainConfig:
    return TrainConfig(
        maze=parse_maze(DEFAULT_MAZE_TEXT),
        agent=AgentConfig(),
        fovea=FoveationConfig(),
        spectral=SpectralConfig(),
        perturb=PerturbConfig(),
    )


def _to_bool(val: str) -> bool:
    low = val.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    raise ValueError(f"expected true or false, got {val!r}")


def _to_int(val: str) -> int:
    return int(val, 10)


def _fmt(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


# key -> (section, field, converter); sections name the sub-config the
# field lives on, "train"/"eval" map onto TrainConfig itself.
_SCHEMA: dict[str, tuple[str, str, object]] = {
    "agent.gamma": ("agent", "gamma", float),
    "agent.rollout_n": ("agent", "rollout_n", _to_int),
    "agent.entropy_beta": ("agent", "entropy_beta", float),
    "agent.value_coef": ("agent", "value_coef", float),
    "agent.lr": ("agent", "lr", float),
    "agent.rmsprop_decay": ("agent", "rmsprop_decay", float),
    "agent.rmsprop_epsilon": ("agent", "rmsprop_epsilon", float),
    "agent.frame_stack": ("agent", "frame_stack", _to_int),
    "agent.rp_skew": ("agent", "rp_skew", float),
    "agent.replay_capacity": ("agent", "replay_capacity", _to_int),
    "agent.input_size": ("agent", "input_size", _to_int),
    "agent.hidden_units": ("agent", "hidden_units", _to_int),
    "fovea.alpha": ("fovea", "alpha", float),
    "fovea.overlay_weight": ("fovea", "overlay_weight", float),
    "fovea.enabled": ("fovea", "enabled", _to_bool),
    "fovea.literal_additive": ("fovea", "literal_additive", _to_bool),
    "spectral.working_size": ("spectral", "working_size", _to_int),
    "spectral.epsilon": ("spectral", "epsilon", float),
    "spectral.box_kernel": ("spectral", "box_kernel", _to_int),
    "spectral.blur_sigma": ("spectral", "blur_sigma", float),
    "perturb.noise_sigma": ("perturb", "noise_sigma", float),
    "perturb.tint_hue": ("perturb", "tint_hue", float),
    "perturb.tint_strength": ("perturb", "tint_strength", float),
    "perturb.coin_p": ("perturb", "coin_p", float),
    "perturb.seed": ("perturb", "seed", _to_int),
    "maze.grid": ("maze", "grid", str),
    "maze.file": ("maze", "file", str),
    "maze.episode_len": ("maze", "episode_len", _to_int),
    "maze.apple_reward": ("maze", "apple_reward", float),
    "maze.goal_reward": ("maze", "goal_reward", float),
    "train.total_env_steps": ("train", "total_env_steps", _to_int),
    "train.workers": ("train", "workers", _to_int),
    "train.seed": ("train", "seed", _to_int),
    "train.out_dir": ("train", "out_dir", str),
    "train.checkpoint_every": ("train", "checkpoint_every", _to_int),
    "train.virtual_clock": ("train", "virtual_clock", _to_bool),
    "eval.games": ("eval", "games", _to_int),
    "eval.greedy": ("eval", "greedy", _to_bool),
}

_TRAIN_FIELD_BY_KEY = {
    "train.total_env_steps": "total_env_steps",
    "train.workers": "workers",
    "train.seed": "seed",
    "train.out_dir": "out_dir",
    "train.checkpoint_every": "checkpoint_every",
    "train.virtual_clock": "virtual_clock",
    "eval.games": "eval_games",
    "eval.greedy": "eval_greedy",
}


def parse_config(text: str) -> TrainConfig:
    """Parse config text; every key optional, unknown keys rejected."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, _, val = stripped.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _SCHEMA:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ValueError(f"config line {lineno}: duplicate key {key!r}")
        raw[key] = val

    values: dict[str, object] = {}
    for key, val in raw.items():
        _, _, conv = _SCHEMA[key]
        try:
            values[key] = conv(val)  # type: ignore[operator]
        except ValueError as exc:
            raise ValueError(f"config key {key!r}: {exc}") from None

    if "maze.grid" in values and "maze.file" in values:
        raise ValueError("maze.grid and maze.file are mutually exclusive")
    if "maze.grid" in values:
        maze_text = str(values["maze.grid"]).replace("/", "\n")
    elif "maze.file" in values:
        with open(str(values["maze.file"]), "r", encoding="utf-8") as fh:
            maze_text = fh.read()
    else:
        maze_text = DEFAULT_MAZE_TEXT
    maze = parse_maze(
        maze_text,
        episode_len=int(values.get("maze.episode_len", 500)),
        apple_reward=float(values.get("maze.apple_reward", 1.0)),
        goal_reward=float(values.get("maze.goal_reward", 10.0)),
    )

    def build(section: str, ctor):  # type: ignore[no-untyped-def]
        kwargs = {
            field: values[key]
            for key, (sec, field, _) in _SCHEMA.items()
            if sec == section and key in values
        }
        return ctor(**kwargs)

    cfg = TrainConfig(
        maze=maze,
        agent=build("agent", AgentConfig),
        fovea=build("fovea", FoveationConfig),
        spectral=build("spectral", SpectralConfig),
        perturb=build("perturb", PerturbConfig),
    )
    overrides = {
        _TRAIN_FIELD_BY_KEY[key]: values[key] for key in _TRAIN_FIELD_BY_KEY if key in values
    }
    return replace(cfg, **overrides) if overrides else cfg


def dump_config(cfg: TrainConfig) -> str:
    """Canonical text form; parse_config(dump_config(c)) == c."""
    sections = {
        "agent": cfg.agent,
        "fovea": cfg.fovea,
        "spectral": cfg.spectral,
        "perturb": cfg.perturb,
    }
    lines: list[str] = []
    for key, (section, field, _) in _SCHEMA.items():
        if key == "maze.file":
            continue
        if section == "maze":
            if field == "grid":
                value: object = "/".join(cfg.maze.grid)
            else:
                value = getattr(cfg.maze, field)
        elif section in ("train", "eval"):
            value = getattr(cfg, _TRAIN_FIELD_BY_KEY[key])
        else:
            value = getattr(sections[section], field)
        lines.append(f"{key} = {_fmt(value)}")
    return "\n".join(lines) + "\n"


def load_config(path: str) -> TrainConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
