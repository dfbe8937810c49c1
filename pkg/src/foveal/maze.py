"""Grid-maze simulator rendered to RGB frames.

A small deterministic navigation task: the agent walks a walled grid,
picks up apples (+1, consumed) and the goal (+10, which teleports it to a
random floor cell so the episode keeps going), until a fixed step budget
runs out. Frames are top-down rasters, 12 px per cell, so the default
7x7 maze renders at exactly 84x84.

State transitions are pure: `step` returns a fresh state and leaves its
input untouched. The only randomness (goal teleports) lives in an explicit
generator state carried inside EnvState, so replaying a state replays its
future.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Any

import numpy as np

CELL_PX = 12
_INSET = 2

WALL_CHAR = "#"
FLOOR_CHAR = "."
START_CHAR = "S"
GOAL_CHAR = "G"
APPLE_CHAR = "a"

# Palette: the agent is the unique blue-dominant color, and its luminance
# (~46) sits far from the floor it walks on (~230), which keeps it crisp
# in the grayscale planes the learner actually sees.
COLOR_WALL = (40, 40, 40)
COLOR_FLOOR = (230, 230, 230)
COLOR_GOAL = (220, 30, 30)
COLOR_APPLE = (40, 200, 40)
COLOR_AGENT = (0, 40, 200)

DEFAULT_MAZE_TEXT = """\
#######
#S..a.#
#.##..#
#a.a#.#
#.##..#
#..a.G#
#######
"""

Cell = tuple[int, int]


class Action(enum.IntEnum):
    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3


_MOVES: dict[Action, Cell] = {
    Action.UP: (-1, 0),
    Action.DOWN: (1, 0),
    Action.LEFT: (0, -1),
    Action.RIGHT: (0, 1),
}


@dataclass(frozen=True)
class MazeSpec:
    """Static maze description; hashable so renders can be cached."""

    grid: tuple[str, ...]
    start: Cell
    goal: Cell
    apples: frozenset[Cell]
    apple_reward: float = 1.0
    goal_reward: float = 10.0
    episode_len: int = 500

    @property
    def height(self) -> int:
        return len(self.grid)

    @property
    def width(self) -> int:
        return len(self.grid[0])

    def is_floor(self, cell: Cell) -> bool:
        r, c = cell
        if not (0 <= r < self.height and 0 <= c < self.width):
            return False
        return self.grid[r][c] != WALL_CHAR

    def floor_cells(self) -> list[Cell]:
        return [
            (r, c)
            for r in range(self.height)
            for c in range(self.width)
            if self.grid[r][c] != WALL_CHAR
        ]

    def to_text(self) -> str:
        return "\n".join(self.grid) + "\n"


@dataclass(frozen=True)
class EnvState:
    """One moment of play. rng_state drives goal-teleport draws only."""

    agent_pos: Cell
    apples_remaining: frozenset[Cell]
    step_count: int
    episode_return: float
    rng_state: dict[str, Any] = field(compare=False)


def _reachable(grid: tuple[str, ...], start: Cell) -> set[Cell]:
    """Flood fill over non-wall cells."""
    height, width = len(grid), len(grid[0])
    seen = {start}
    frontier = [start]
    while frontier:
        r, c = frontier.pop()
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            nr, nc = r + dr, c + dc
            if 0 <= nr < height and 0 <= nc < width:
                if grid[nr][nc] != WALL_CHAR and (nr, nc) not in seen:
                    seen.add((nr, nc))
                    frontier.append((nr, nc))
    return seen


def parse_maze(
    text: str,
    episode_len: int = 500,
    apple_reward: float = 1.0,
    goal_reward: float = 10.0,
) -> MazeSpec:
    """Build a validated MazeSpec from a character-grid description.

    One row per line; `#` wall, `.` floor, `S` start, `G` goal, `a` apple.
    Exactly one start and one goal; the goal must be reachable from the
    start; the grid must be rectangular.
    """
    rows = tuple(line for line in text.splitlines() if line.strip())
    if not rows:
        raise ValueError("maze text is empty")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("maze rows must all have the same length")
    if episode_len < 1:
        raise ValueError("episode_len must be >= 1")

    starts: list[Cell] = []
    goals: list[Cell] = []
    apples: set[Cell] = set()
    for r, row in enumerate(rows):
        for c, ch in enumerate(row):
            if ch == START_CHAR:
                starts.append((r, c))
            elif ch == GOAL_CHAR:
                goals.append((r, c))
            elif ch == APPLE_CHAR:
                apples.add((r, c))
            elif ch not in (WALL_CHAR, FLOOR_CHAR):
                raise ValueError(f"unknown maze character {ch!r} at row {r}, col {c}")
    if len(starts) != 1:
        raise ValueError(f"maze needs exactly one start cell, found {len(starts)}")
    if len(goals) != 1:
        raise ValueError(f"maze needs exactly one goal cell, found {len(goals)}")

    reachable = _reachable(rows, starts[0])
    if goals[0] not in reachable:
        raise ValueError("goal is not reachable from the start")

    return MazeSpec(
        grid=rows,
        start=starts[0],
        goal=goals[0],
        apples=frozenset(apples),
        apple_reward=apple_reward,
        goal_reward=goal_reward,
        episode_len=episode_len,
    )


def default_maze(episode_len: int = 500) -> MazeSpec:
    return parse_maze(DEFAULT_MAZE_TEXT, episode_len=episode_len)


def reset(spec: MazeSpec, seed: int | list[int]) -> tuple[EnvState, np.ndarray]:
    """Fresh episode: agent at start, all apples present, clock at zero."""
    rng = np.random.default_rng(seed)
    state = EnvState(
        agent_pos=spec.start,
        apples_remaining=spec.apples,
        step_count=0,
        episode_return=0.0,
        rng_state=rng.bit_generator.state,
    )
    return state, render(spec, state)


def _teleport_target(spec: MazeSpec, state: EnvState) -> tuple[Cell, dict[str, Any]]:
    # Land anywhere on the floor except the goal itself and uncollected
    # apples, so a teleport never triggers a second reward.
    eligible = sorted(
        cell
        for cell in spec.floor_cells()
        if cell != spec.goal and cell not in state.apples_remaining
    )
    rng = np.random.default_rng()
    rng.bit_generator.state = state.rng_state
    cell = eligible[int(rng.integers(len(eligible)))]
    return cell, rng.bit_generator.state


def step(
    spec: MazeSpec, state: EnvState, action: Action
) -> tuple[EnvState, float, bool, np.ndarray]:
    """Advance one timestep; returns (state', reward, done, frame)."""
    if state.step_count >= spec.episode_len:
        raise ValueError("episode is finished; reset before stepping again")
    action = Action(action)

    dr, dc = _MOVES[action]
    target = (state.agent_pos[0] + dr, state.agent_pos[1] + dc)
    if not spec.is_floor(target):
        target = state.agent_pos

    reward = 0.0
    apples = state.apples_remaining
    rng_state = state.rng_state
    pos = target
    if target in apples:
        reward += spec.apple_reward
        apples = apples - {target}
    if target == spec.goal:
        reward += spec.goal_reward
        pos, rng_state = _teleport_target(spec, state)

    new_state = EnvState(
        agent_pos=pos,
        apples_remaining=apples,
        step_count=state.step_count + 1,
        episode_return=state.episode_return + reward,
        rng_state=rng_state,
    )
    done = new_state.step_count >= spec.episode_len
    return new_state, reward, done, render(spec, new_state)


@functools.lru_cache(maxsize=256)
def _base_frame(spec: MazeSpec, apples: frozenset[Cell]) -> np.ndarray:
    """Raster of walls, floor, goal, and apples; agent stamped separately."""
    frame = np.zeros((spec.height * CELL_PX, spec.width * CELL_PX, 3), dtype=np.uint8)
    for r in range(spec.height):
        for c in range(spec.width):
            if spec.grid[r][c] == WALL_CHAR:
                color = COLOR_WALL
            elif (r, c) == spec.goal:
                color = COLOR_GOAL
            else:
                color = COLOR_FLOOR
            frame[r * CELL_PX : (r + 1) * CELL_PX, c * CELL_PX : (c + 1) * CELL_PX] = color
    for r, c in apples:
        y, x = r * CELL_PX + _INSET, c * CELL_PX + _INSET
        side = CELL_PX - 2 * _INSET
        frame[y : y + side, x : x + side] = COLOR_APPLE
    frame.setflags(write=False)
    return frame


def render(spec: MazeSpec, state: EnvState) -> np.ndarray:
    """Top-down RGB frame of the current state, 12 px per cell."""
    frame = _base_frame(spec, state.apples_remaining).copy()
    r, c = state.agent_pos
    y, x = r * CELL_PX + _INSET, c * CELL_PX + _INSET
    side = CELL_PX - 2 * _INSET
    frame[y : y + side, x : x + side] = COLOR_AGENT
    return frame
