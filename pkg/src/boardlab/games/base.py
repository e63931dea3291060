"""Shared vocabulary for the two turn-based engines."""

from __future__ import annotations

import enum


class Player(enum.Enum):
    WHITE = 1
    BLACK = 2

    @property
    def opponent(self) -> "Player":
        return Player.BLACK if self is Player.WHITE else Player.WHITE

    @property
    def letter(self) -> str:
        return "w" if self is Player.WHITE else "b"


def player_from_letter(letter: str) -> Player:
    if letter == "w":
        return Player.WHITE
    if letter == "b":
        return Player.BLACK
    raise ValueError(f"unknown player letter {letter!r}")


class Status(enum.Enum):
    ONGOING = "ongoing"
    WON = "won"
    DRAWN = "drawn"


class GameError(Exception):
    """Base class for engine errors."""


class InvalidConfigError(GameError, ValueError):
    """A game configuration violates its documented ranges."""


class IllegalMoveError(GameError, ValueError):
    """A move was rejected; the message states the reason."""


class TerminalStateError(GameError):
    """An operation that needs an ongoing game was given a finished one."""
