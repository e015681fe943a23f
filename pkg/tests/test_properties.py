import random

from gen_core import CoreGen
from oracle_clean import Oracle

from ccheck import clean as C


def run_differential(seed: int, programs: int) -> None:
    rng = random.Random(seed)
    gen = CoreGen(rng)
    for _ in range(programs):
        core = gen.program()
        prog = C.translate(core)
        target = core.functions[-1]
        args = [rng.randint(-5, 10) for _ in target.params]
        value, st = C.call(prog, target.name, list(args), instrument=True)
        want_value, want_failed = Oracle(core).run(target.name, list(args))
        # agreement with the independent interpreter
        assert (st.failed is None) == (want_failed is None), (st.failed, want_failed)
        if st.failed is None:
            assert value == want_value
            oracle2 = Oracle(core)
            oracle2.run(target.name, list(args))
            for g in core.globals:
                assert st.globals[g.name] == oracle2.globals[g.name]
        # frame balance: every local stack is back to its pre-call depth
        for name, stack in st.locals.items():
            assert stack == [], (target.name, name)
        assert st.result == []
        # control flags settle
        assert st.break_val is False and st.return_val is False


def test_differential_and_frame_balance_200():
    run_differential(seed=99173, programs=200)


def test_flag_soundness_instrumentation_sees_writes():
    rng = random.Random(5)
    gen = CoreGen(rng)
    saw_writes = 0
    for _ in range(25):
        core = gen.program()
        prog = C.translate(core)
        target = core.functions[-1]
        args = [1 for _ in target.params]
        _, st = C.call(prog, target.name, args, instrument=True)
        saw_writes += len(st.write_log)
    assert saw_writes > 0
