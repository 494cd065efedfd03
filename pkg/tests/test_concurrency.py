import threading

import anyio

from spgd.utils.concurrency import gather_in_threadpool, map_concurrently, run_in_threadpool


class TestMapConcurrently:
    def test_keeps_item_order(self):
        assert map_concurrently(lambda x: x * x, range(6)) == [0, 1, 4, 9, 16, 25]

    def test_sequential_flag(self):
        main = threading.get_ident()
        assert map_concurrently(lambda _: threading.get_ident(), range(3), concurrent=False) == [main] * 3

    def test_inside_an_event_loop(self):
        async def main():
            return map_concurrently(lambda x: x + 1, [1, 2, 3])

        assert anyio.run(main) == [2, 3, 4]

    def test_nested_inside_a_worker(self):
        def outer(x):
            return sum(map_concurrently(lambda y: x * y, [1, 2, 3]))

        assert map_concurrently(outer, [1, 2]) == [6, 12]


class TestThreadpool:
    def test_gather_keeps_submission_order(self):
        funcs = [lambda i=i: i for i in range(5)]
        assert anyio.run(gather_in_threadpool, funcs) == [0, 1, 2, 3, 4]

    def test_keyword_arguments(self):
        async def main():
            return await run_in_threadpool(divmod, 7, 2), await run_in_threadpool(int, "ff", base=16)

        assert anyio.run(main) == ((3, 1), 255)
