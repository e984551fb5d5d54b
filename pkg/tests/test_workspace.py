import json

import pytest

from finicat.workspace import WorkspaceError, corpus_paths, load_corpus, parse_workspace


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return p


def kinds(exc):
    return [d.kind for d in exc.value.diagnostics]


def test_empty_file_list_gives_empty_workspace():
    ws = parse_workspace([])
    assert ws.categories == {} and ws.scenarios == []


def test_corpus_loads_cleanly():
    ws = load_corpus()
    assert len(corpus_paths()) >= 5
    assert {"lattice2", "opens", "twotops", "z2"} <= set(ws.categories)
    assert ws.categories["cospan"].dom("l") == "b"
    assert len(ws.scenarios) >= 6


def test_dangling_reference(tmp_path):
    p = write(tmp_path, "a.json", {"schema": "finicat/1", "presheaves": {"p": {"category": "ghost", "values": {}}}})
    with pytest.raises(WorkspaceError) as exc:
        parse_workspace([p])
    assert kinds(exc) == ["UnresolvedReference"]
    assert "ghost" in exc.value.diagnostics[0].message
    assert exc.value.diagnostics[0].location == "presheaves.p.category"


def test_cross_file_references(tmp_path):
    a = write(tmp_path, "a.json", {"schema": "finicat/1", "categories": {"c2": {"chain": 2}, "c2op": {"opposite": "c2"}}})
    b = write(
        tmp_path,
        "b.json",
        {"schema": "finicat/1", "diagrams": {"d": {"category": "c2op", "values": {"0": ["x"], "1": ["y"]}, "actions": {"0->1": {"y": "x"}}}}},
    )
    ws = parse_workspace([b, a])
    assert ws.diagrams["d"]("0->1", "y") == "x"


def test_parse_error_has_line(tmp_path):
    p = write(tmp_path, "bad.json", '{\n  "schema": "finicat/1",\n  "categories": {,}\n}')
    with pytest.raises(WorkspaceError) as exc:
        parse_workspace([p])
    d = exc.value.diagnostics[0]
    assert d.kind == "ParseError" and d.location.startswith("line 3")


def test_unknown_field_is_an_error(tmp_path):
    p = write(tmp_path, "x.json", {"schema": "finicat/1", "categorys": {}})
    with pytest.raises(WorkspaceError) as exc:
        parse_workspace([p])
    assert kinds(exc) == ["ParseError"]


def test_wrong_schema_version(tmp_path):
    p = write(tmp_path, "x.json", {"schema": "finicat/2"})
    with pytest.raises(WorkspaceError):
        parse_workspace([p])


def test_invalid_category_reports_module_violations(tmp_path):
    bad = {
        "schema": "finicat/1",
        "categories": {"c": {"objects": ["a", "b", "c"], "morphisms": [["f", "a", "b"], ["g", "b", "c"]]}},
    }
    with pytest.raises(WorkspaceError) as exc:
        parse_workspace([write(tmp_path, "c.json", bad)])
    assert kinds(exc) == ["ValidationFailed"]
    assert "CompositionNotTotal" in exc.value.diagnostics[0].message


def test_duplicate_names_across_files(tmp_path):
    a = write(tmp_path, "a.json", {"schema": "finicat/1", "categories": {"c": {"chain": 2}}})
    b = write(tmp_path, "b.json", {"schema": "finicat/1", "categories": {"c": {"chain": 3}}})
    with pytest.raises(WorkspaceError) as exc:
        parse_workspace([a, b])
    assert kinds(exc) == ["DuplicateName"]


def test_category_caps(tmp_path):
    p = write(tmp_path, "big.json", {"schema": "finicat/1", "categories": {"big": {"chain": 30}}})
    with pytest.raises(WorkspaceError):
        parse_workspace([p], max_morphisms=100)
    assert "big" in parse_workspace([p]).categories


def test_all_diagnostics_collected(tmp_path):
    data = {
        "schema": "finicat/1",
        "presheaves": {"p": {"category": "nope1", "values": {}}},
        "sites": {"s": {"category": "nope2", "preset": "trivial"}},
    }
    with pytest.raises(WorkspaceError) as exc:
        parse_workspace([write(tmp_path, "x.json", data)])
    assert len(exc.value.diagnostics) == 2


def test_unreadable_file(tmp_path):
    with pytest.raises(WorkspaceError) as exc:
        parse_workspace([tmp_path / "missing.json"])
    assert kinds(exc) == ["ParseError"]


def test_groups_and_matrices(tmp_path):
    data = {
        "schema": "finicat/1",
        "groups": {"g": {"presentation": [[2, 0], [0, 3]]}, "h": {"rank": 2}},
        "matrices": {"m": [[1, 2], [3, 4]]},
    }
    ws = parse_workspace([write(tmp_path, "g.json", data)])
    assert str(ws.groups["g"]) == "Z/6"
    assert str(ws.groups["h"]) == "Z^2"
    assert ws.matrices["m"].det() == -2
    ragged = write(tmp_path, "r.json", {"schema": "finicat/1", "matrices": {"m": [[1], [1, 2]]}})
    with pytest.raises(WorkspaceError):
        parse_workspace([ragged])
