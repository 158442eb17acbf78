"""
运行时配置与任务参数。

环境变量：
    QUASIARR_CACHE_DIR  群元素表的 JSON 缓存目录（未设置则不缓存）
    QUASIARR_ORDER_CAP  群阶上限（默认 10000）
"""

from __future__ import annotations

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")

MODULES = ("Dm", "Dtilde", "Cat", "cCat", "BCCat", "cBCCat", "cone")
FORMATS = ("text", "structured")


@dataclass
class Settings:
    order_cap: int = field(default_factory=lambda: int(os.environ.get("QUASIARR_ORDER_CAP", "10000")))
    threads: int = 1
    cache_dir: str | None = field(default_factory=lambda: os.environ.get("QUASIARR_CACHE_DIR") or None)


settings = Settings()


def default_cutoff(rank: int) -> int:
    """秩 2 取 12，秩 3 取 8，更高秩取 6。"""
    if rank <= 2:
        return 12
    if rank == 3:
        return 8
    return 6


@dataclass
class JobConfig:
    """一次 CLI 任务的参数。"""

    group: str
    rank: int | None = None
    k: int | None = None
    m: str = "1"
    cutoff: int | None = None
    module: str = "Dm"
    fmt: str = "text"
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.cutoff is not None and self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}, choose from {FORMATS}")
        if self.module not in MODULES:
            raise ValueError(f"unknown module {self.module!r}, choose from {MODULES}")
        if any(int(v) < 0 for v in self.m.split(",") if v.strip()):
            raise ValueError(f"multiplicities must be nonnegative: {self.m}")

    def resolved_cutoff(self, rank: int) -> int:
        return self.cutoff if self.cutoff is not None else default_cutoff(rank)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """按输入顺序返回结果；threads 为 1 时顺序执行。"""
    items = list(items)
    n = settings.threads if threads is None else threads
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
