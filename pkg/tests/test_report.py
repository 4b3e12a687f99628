"""Delimited output bytes and chart rendering."""

from __future__ import annotations

from stacktrace.analytics import ClassifiedGroup, FlowRecord, PatchClass
from stacktrace.grouping import PatchGroup
from stacktrace.report import (
    render_composition_chart,
    render_integration_chart,
    render_stack_size_chart,
    write_composition_csv,
    write_flow_csv,
    write_integration_csv,
    write_stack_size_csv,
)


def test_stack_size_csv_bytes(tmp_path):
    path = tmp_path / "stack_size.csv"
    write_stack_size_csv(path, [("v1", 5), ("v2", 6), ("v3", 4)])
    assert path.read_bytes() == b"release_id,size\nv1,5\nv2,6\nv3,4\n"


def test_composition_csv_bytes(tmp_path):
    path = tmp_path / "composition.csv"
    write_composition_csv(path, [("v1", 1, 1, 3)])
    assert path.read_bytes() == (
        b"release_id,forwardport,backport,invariant\nv1,1,1,3\n"
    )


def test_integration_csv_blank_days_for_invariant(tmp_path):
    path = tmp_path / "integration.csv"
    items = [
        ClassifiedGroup(
            PatchGroup(("a",), "a", "u"), PatchClass.FORWARDPORT, 0, 0, 30
        ),
        ClassifiedGroup(PatchGroup(("b",), "b"), PatchClass.INVARIANT, 0, None, None),
        ClassifiedGroup(
            PatchGroup(("c",), "c", "u2"), PatchClass.BACKPORT, 0, 0, -12
        ),
    ]
    write_integration_csv(path, items)
    assert path.read_bytes() == (
        b"group_representative,class,integration_days\n"
        b"a,forwardport,30\nb,invariant,\nc,backport,-12\n"
    )


def test_flow_csv_bytes(tmp_path):
    path = tmp_path / "flow.csv"
    write_flow_csv(path, [FlowRecord("v1", "v2", 2, 1, 4)])
    assert path.read_bytes() == b"from,to,inflow,outflow,invariant\nv1,v2,2,1,4\n"


def test_csv_writes_are_deterministic(tmp_path):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    rows = [("v1", 3), ("v2", 9)]
    write_stack_size_csv(first, rows)
    write_stack_size_csv(second, rows)
    assert first.read_bytes() == second.read_bytes()


def test_charts_render_svg_and_png(tmp_path):
    written = render_stack_size_chart(tmp_path / "stack_size", [("v1", 5), ("v2", 6)])
    written += render_composition_chart(
        tmp_path / "composition", [("v1", 1, 1, 3), ("v2", 0, 2, 4)]
    )
    written += render_integration_chart(
        tmp_path / "integration", [(-7, 1), (0, 2), (21, 1)], 7
    )
    assert {p.suffix for p in written} == {".svg", ".png"}
    assert len(written) == 6
    for path in written:
        assert path.is_file()
        assert path.stat().st_size > 0


def test_empty_histogram_still_renders(tmp_path):
    written = render_integration_chart(tmp_path / "integration", [], 7)
    for path in written:
        assert path.is_file()
