import pytest

from recomp.engine import Stage, StatsReport, Verdict
from recomp.report import parse_report, render_report, render_text


def _stats(**kw):
    base = dict(strategy="S2", n=4, m=1, k=1,
                stages=(Stage("D_P", 288, 93, None),
                        Stage("G1", 64, 12, 130)),
                max_states=288, elapsed_ms=41)
    base.update(kw)
    return StatsReport(**base)


def test_round_trip_holds():
    verdict = Verdict("holds")
    stats = _stats()
    v2, s2 = parse_report(render_report(verdict, stats))
    assert v2 == verdict
    assert s2 == stats


def test_round_trip_violated_with_witness():
    verdict = Verdict("violated", witness=("SndPrepare(rm1)", "RcvPrepare(rm1)"))
    v2, s2 = parse_report(render_report(verdict, _stats()))
    assert v2.outcome == "violated"
    assert v2.witness == ("SndPrepare(rm1)", "RcvPrepare(rm1)")
    assert s2 == _stats()


def test_round_trip_inconclusive_reason():
    verdict = Verdict("inconclusive", reason="bound-exceeded")
    v2, _ = parse_report(render_report(verdict, _stats(strategy="")))
    assert v2 == verdict


def test_unsupported_version_rejected():
    text = render_report(Verdict("holds"), _stats())
    text = text.replace("report-version: 1", "report-version: 99")
    with pytest.raises(ValueError):
        parse_report(text)


def test_stage_lines_preserve_missing_fields():
    stats = _stats(stages=(Stage("only", 10, None, None),))
    _, s2 = parse_report(render_report(Verdict("holds"), stats))
    assert s2.stages[0].minimized is None
    assert s2.stages[0].composed is None


def test_text_rendering_mentions_the_essentials():
    verdict = Verdict("violated", witness=(("SndPrepare", ("str", "rm1")),))
    text = render_text(verdict, _stats())
    assert "violated" in text
    assert "counterexample" in text
    assert 'SndPrepare("rm1")' in text
    assert "max states: 288" in text
