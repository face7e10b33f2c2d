"""Terminal step-through of an LTS."""
from __future__ import annotations

from typing import TextIO

from fspv.model import ERROR, Lts, trace_to_text

HELP = "enter a number to step, u undo, r reset, t trace, q quit"


class Animator:
    """Cursor over an LTS with an undo history; every step follows an existing transition."""

    def __init__(self, lts: Lts):
        self.lts = lts
        self.history: list[tuple[int, str]] = []  # (state before, label)
        self.state = lts.initial

    def enabled(self) -> tuple[tuple[str, int], ...]:
        return () if self.state == ERROR else self.lts.out(self.state)

    def step(self, choice: int) -> None:
        label, target = self.enabled()[choice]
        self.history.append((self.state, label))
        self.state = target

    def undo(self) -> bool:
        if not self.history:
            return False
        self.state, _ = self.history.pop()
        return True

    def reset(self) -> None:
        self.history.clear()
        self.state = self.lts.initial

    @property
    def trace(self) -> tuple[str, ...]:
        return tuple(label for _, label in self.history)


def run_animate(lts: Lts, stdin: TextIO, stdout: TextIO) -> int:
    anim = Animator(lts)
    stdout.write(f"animating {lts.name or 'lts'}: {HELP}\n")

    def show():
        stdout.write(f"state {anim.state}\n")
        if anim.state == ERROR:
            stdout.write("*** ERROR: property violated (u undo, r reset, q quit)\n")
            return
        moves = anim.enabled()
        if not moves:
            stdout.write("*** DEADLOCK: no enabled actions (u undo, r reset, q quit)\n")
            return
        for i, (label, _) in enumerate(moves, 1):
            stdout.write(f"  {i}: {label}\n")

    show()
    while True:
        stdout.write("> ")
        stdout.flush()
        line = stdin.readline()
        if not line:
            break
        cmd = line.strip()
        if cmd == "q":
            break
        if cmd == "t":
            stdout.write(f"trace: {trace_to_text(anim.trace)}\n")
            continue
        if cmd == "u":
            if not anim.undo():
                stdout.write("nothing to undo\n")
                continue
        elif cmd == "r":
            anim.reset()
        elif cmd.isdigit() and 1 <= int(cmd) <= len(anim.enabled()):
            anim.step(int(cmd) - 1)
        else:
            stdout.write(f"unrecognised input {cmd!r}; {HELP}\n")
            continue
        show()
    stdout.write(f"trace: {trace_to_text(anim.trace)}\n")
    return 0
