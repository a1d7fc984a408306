"""
Progress Tracker

Progress over the tasks of an experiment grid. The bar is drawn on
standard error; periodic and final statistics go through the logger.
"""

import logging
import sys
import time
from dataclasses import dataclass, field
from typing import List, Optional, TextIO

logger = logging.getLogger(__name__)

BAR_WIDTH = 40


@dataclass
class RunStats:
    """Outcome counts and wall time of one grid run."""
    total_tasks: int = 0
    completed_tasks: int = 0
    failed_tasks: int = 0
    failed_labels: List[str] = field(default_factory=list)
    start_time: float = field(default_factory=time.perf_counter)
    end_time: Optional[float] = None

    @property
    def finished_tasks(self) -> int:
        return self.completed_tasks + self.failed_tasks

    @property
    def duration(self) -> float:
        """Elapsed seconds, frozen once finish() is called."""
        end = self.end_time if self.end_time is not None else time.perf_counter()
        return end - self.start_time

    @property
    def success_rate(self) -> float:
        """Completed tasks as a percentage of all tasks."""
        if self.total_tasks == 0:
            return 0.0
        return 100.0 * self.completed_tasks / self.total_tasks

    def record(self, label: str, success: bool):
        if success:
            self.completed_tasks += 1
        else:
            self.failed_tasks += 1
            self.failed_labels.append(label)

    def finish(self):
        self.end_time = time.perf_counter()


class ProgressTracker:
    """
    Counts finished tasks and reports them.

    Args:
        total_items: Number of tasks in the run
        show_bar: Draw a one-line bar on ``stream``
        show_statistics: Log a statistics line every ``update_interval``
            tasks and a summary at the end
        update_interval: Tasks between statistics lines
        stream: Bar output (default: standard error)
    """

    def __init__(
        self,
        total_items: int,
        show_bar: bool = True,
        show_statistics: bool = True,
        update_interval: int = 5,
        stream: Optional[TextIO] = None,
    ):
        self.total_items = total_items
        self.show_bar = show_bar
        self.show_statistics = show_statistics
        self.update_interval = max(update_interval, 1)
        self.stream = stream
        self.stats = RunStats(total_tasks=total_items)

    def update(self, label: str, success: bool):
        """Record one finished task."""
        self.stats.record(label, success)
        done = self.stats.finished_tasks

        if self.show_bar and self.total_items > 0:
            self._draw(label, done)
        if self.show_statistics and done % self.update_interval == 0:
            logger.info(
                f"Tasks: {done}/{self.total_items} | "
                f"ok {self.stats.completed_tasks} | failed {self.stats.failed_tasks}"
            )

    def _draw(self, label: str, done: int):
        stream = self.stream or sys.stderr
        fraction = done / self.total_items
        filled = min(int(BAR_WIDTH * fraction), BAR_WIDTH)
        line = f"\r[{'#' * filled}{'.' * (BAR_WIDTH - filled)}] {done}/{self.total_items} ({100 * fraction:.1f}%) - {label}"
        stream.write(line + ("\n" if done >= self.total_items else ""))
        stream.flush()

    def finish(self):
        """Stop the clock and log the summary."""
        self.stats.finish()
        if not self.show_statistics:
            return
        logger.info(
            f"{self.stats.total_tasks} task(s) in {self.stats.duration:.2f} s, "
            f"{self.stats.success_rate:.1f}% ok"
        )
        if self.stats.failed_labels:
            logger.warning(f"Failed tasks: {', '.join(self.stats.failed_labels)}")
