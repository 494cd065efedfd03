from __future__ import annotations

import functools
import threading
import typing

import anyio
import anyio.to_thread
import sniffio

P = typing.ParamSpec("P")
T = typing.TypeVar("T")
R = typing.TypeVar("R")

_local = threading.local()


async def run_in_threadpool(func: typing.Callable[P, T], *args: P.args, **kwargs: P.kwargs) -> T:
    if kwargs:
        func = functools.partial(func, **kwargs)
    return await anyio.to_thread.run_sync(_as_worker, func, *args)


def _as_worker(func: typing.Callable[..., T], *args: typing.Any) -> T:
    _local.in_worker = True
    try:
        return func(*args)
    finally:
        _local.in_worker = False


async def gather_in_threadpool(funcs: typing.Sequence[typing.Callable[[], T]]) -> list[T]:
    """Run every callable in a worker thread; results keep submission order."""
    results: list[typing.Any] = [None] * len(funcs)

    async with anyio.create_task_group() as task_group:

        async def run(index: int, func: typing.Callable[[], T]) -> None:
            results[index] = await run_in_threadpool(func)

        for index, func in enumerate(funcs):
            task_group.start_soon(run, index, func)

    return results


def map_concurrently(
    func: typing.Callable[[R], T],
    items: typing.Iterable[R],
    concurrent: bool = True,
) -> list[T]:
    """Apply ``func`` to every item, optionally on the anyio thread pool.

    The returned list is ordered like ``items`` whatever the scheduling.
    Inside a worker thread, or when the calling thread already runs an
    event loop, it evaluates sequentially: ``anyio.run`` cannot nest.
    """
    items = list(items)
    if not concurrent or len(items) < 2 or getattr(_local, "in_worker", False) or _loop_running():
        return [func(item) for item in items]
    funcs = [functools.partial(func, item) for item in items]
    return anyio.run(gather_in_threadpool, funcs)


def _loop_running() -> bool:
    try:
        sniffio.current_async_library()
    except sniffio.AsyncLibraryNotFoundError:
        return False
    return True
