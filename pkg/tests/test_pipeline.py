"""The feedback loop: attempt accounting, thresholds, persistence."""
import pytest

from wordart.errors import ProviderUnavailable
from wordart.llm import MockBackend
from wordart.pipeline import (
    DesignJob,
    JobConfig,
    JobState,
    load_manifest,
    persist_run,
    run_pipeline,
    verify_manifest,
)
from wordart.providers import MockProvider
from wordart.semtypo import OptimizationConfig, RegionConfig

from conftest import FONT_PATH


def tiny_config(**kw):
    base = dict(
        raw_text="A cat in jewelry design",
        text="O",
        k=1,
        max_restarts=2,
        seeds_per_attempt=2,
        seed=5,
        canvas_px=96,
        min_points=24,
        workers=1,
        region=RegionConfig(presplit_threshold_px=30.0),
        optimization=OptimizationConfig(
            iterations=4, crop_count=2, crop_px=64, canvas_px=96, frame_stride=2
        ),
    )
    base.update(kw)
    return JobConfig(**base)


class ScriptedScorer:
    """Returns a fixed per-call score sequence, cycling the last value."""

    def __init__(self, values):
        self.values = list(values)
        self.calls = 0

    def __call__(self, candidate, reference):
        v = self.values[min(self.calls, len(self.values) - 1)]
        self.calls += 1
        return v


@pytest.fixture(scope="module")
def font_data():
    return FONT_PATH.read_bytes()


def run(cfg, font_data, scorer=None, on_event=None):
    job = DesignJob(config=cfg)
    record = run_pipeline(
        job,
        font_data,
        MockBackend(),
        MockProvider(),
        MockProvider(),
        scorer=scorer,
        on_event=on_event,
    )
    return job, record


def test_mock_everything_k1_done_first_attempt(font_data):
    job, record = run(tiny_config(tau=-1e9), font_data)
    assert job.state is JobState.DONE
    assert record.final_state is JobState.DONE
    assert record.restart_count == 0
    assert len(record.attempts) == 1
    assert len(record.selected) == 1
    assert record.request.concept == "cat"
    assert record.request.domain == "jewelry"


def test_impossible_tau_exhausts_restarts(font_data):
    job, record = run(tiny_config(tau=1e9, max_restarts=2), font_data)
    assert record.final_state is JobState.FAILED
    assert len(record.attempts) == 3            # attempts == restarts + 1
    assert record.restart_count == 2
    assert record.failure


def test_scripted_scorer_qualifies_on_second_attempt(font_data):
    # 2 seeds/attempt: first attempt scores below tau, second above.
    scorer = ScriptedScorer([0.1, 0.1, 0.9, 0.9])
    job, record = run(tiny_config(tau=0.5, max_restarts=3), font_data, scorer=scorer)
    assert record.final_state is JobState.DONE
    assert record.restart_count == 1
    assert len(record.attempts) == 2
    assert record.attempts[0].qualified_count == 0
    assert record.attempts[1].qualified_count == 2


def test_attempt_count_equals_restarts_plus_one(font_data):
    for scorer, expect in [
        (ScriptedScorer([0.9]), (1, JobState.DONE, 0)),
        (ScriptedScorer([0.1]), (3, JobState.FAILED, 2)),
        (ScriptedScorer([0.1, 0.1, 0.9, 0.9]), (2, JobState.DONE, 1)),
    ]:
        job, record = run(tiny_config(tau=0.5), font_data, scorer=scorer)
        assert (len(record.attempts), record.final_state, record.restart_count) == expect


def test_done_implies_k_qualified_in_final_attempt(font_data):
    job, record = run(tiny_config(tau=-1e9, k=2), font_data)
    assert record.final_state is JobState.DONE
    assert record.attempts[-1].qualified_count >= 2
    assert len(record.selected) == 2


def test_tau_calibrated_from_first_attempt_when_unset(font_data):
    job, record = run(tiny_config(tau=None, k=1), font_data)
    assert record.tau is not None
    scores = [c.score for c in record.attempts[0].candidates]
    assert min(scores) <= record.tau <= max(scores)


def test_provider_outage_fails_fast_without_restart(font_data):
    class DownProvider:
        def stylize(self, req):
            raise ProviderUnavailable("stylize farm offline")

        def texture(self, req):
            raise ProviderUnavailable("texture farm offline")

    job = DesignJob(config=tiny_config())
    with pytest.raises(ProviderUnavailable):
        run_pipeline(job, font_data, MockBackend(), DownProvider(), DownProvider())
    assert job.restart_count == 0
    assert job.state is JobState.FAILED


def test_full_mock_run_bit_reproducible(font_data):
    _, a = run(tiny_config(tau=-1e9), font_data)
    _, b = run(tiny_config(tau=-1e9), font_data)
    assert a.selected == b.selected
    for ca, cb in zip(a.attempts[0].candidates, b.attempts[0].candidates):
        assert ca.id == cb.id
        assert ca.score == cb.score
        assert ca.i_sem_png == cb.i_sem_png
        assert ca.i_sty_png == cb.i_sty_png
        assert ca.i_tex_png == cb.i_tex_png
        assert ca.svg == cb.svg


def test_events_cover_lifecycle(font_data):
    events = []
    run(tiny_config(tau=-1e9), font_data, on_event=lambda k, p: events.append((k, p)))
    kinds = [k for k, _ in events]
    for expected in ("parsed", "state_change", "concretized", "iteration", "candidate", "ranked", "terminal"):
        assert expected in kinds
    terminal = [p for k, p in events if k == "terminal"]
    assert terminal[-1]["state"] == "done"


# --- persistence ---------------------------------------------------------------

def test_persist_empty_record(tmp_path):
    from wordart.pipeline import RunRecord

    record = RunRecord(job_id="empty1", request=None, config={})
    root = persist_run(record, tmp_path)
    manifest = load_manifest(root)
    assert manifest["attempt_count"] == 0
    assert verify_manifest(root)


def test_persist_idempotent_digest(tmp_path, font_data):
    _, record = run(tiny_config(tau=-1e9), font_data)
    root1 = persist_run(record, tmp_path / "a")
    root2 = persist_run(record, tmp_path / "b")
    m1 = (root1 / "manifest.json").read_bytes()
    m2 = (root2 / "manifest.json").read_bytes()
    assert m1 == m2
    again = persist_run(record, tmp_path / "a")
    assert (again / "manifest.json").read_bytes() == m1


def test_manifest_matches_directory_walk(tmp_path, font_data):
    _, record = run(tiny_config(tau=-1e9), font_data)
    root = persist_run(record, tmp_path)
    assert verify_manifest(root)
    # tampering must be detected both ways
    stray = root / "attempt_00" / "stray.txt"
    stray.write_text("x")
    assert not verify_manifest(root)
    stray.unlink()
    some_png = next(root.rglob("*_sem.png"))
    some_png.write_bytes(b"corrupt")
    assert not verify_manifest(root)
