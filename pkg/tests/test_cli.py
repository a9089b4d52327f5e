import math
from fractions import Fraction
from xml.etree import ElementTree

import pytest

from geomatch import fileio, svg_render
from geomatch.algorithms import TransformationSequence, gen_random_matching, transform
from geomatch.cli import main
from geomatch.errors import ParseError
from geomatch.geom_core import Matching, PointSet, Segment
from geomatch.oracle import enumerate_ncpm


# ---------------------------------------------------------------------------
# instance and sequence files


def test_scalar_tokens_round_trip():
    for v in (0, -7, 12, Fraction(3, 4), Fraction(-22, 7)):
        assert fileio.parse_scalar(fileio.format_scalar(v)) == v
    assert fileio.format_scalar(Fraction(8, 4)) == "2"


def test_instance_parse_with_comments():
    text = "# demo\n0 0 2 2\n\n 4 0 6 3 # trailing\n"
    m = fileio.parse_instance(text)
    assert len(m) == 2
    assert m.base.coord(2) == (4, 0)


def test_instance_round_trip_identity():
    m = gen_random_matching(5, 21)
    text = fileio.dump_instance(m)
    again = fileio.dump_instance(fileio.parse_instance(text))
    assert again == text


def test_instance_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        fileio.parse_instance("0 0 1 1\nbroken line\n", "demo.txt")
    assert err.value.lineno == 2
    with pytest.raises(ParseError):
        fileio.parse_instance("1 2 3\n")
    with pytest.raises(ParseError):
        fileio.parse_instance("a b c d\n")
    with pytest.raises(ParseError):
        fileio.parse_instance("")


def test_sequence_round_trip_identity():
    m = gen_random_matching(4, 2)
    cat = enumerate_ncpm(m.base)
    other = next(c for c in cat if set(c.edges) != set(m.edges))
    seq = transform(m, other)
    text = fileio.dump_sequence(seq)
    parsed = fileio.parse_sequence(text)
    assert fileio.dump_sequence(parsed) == text
    assert parsed.length == seq.length


def test_sequence_rejects_bad_structure():
    with pytest.raises(ParseError):
        fileio.parse_sequence("0 0 1 1\n")  # segment before any header
    with pytest.raises(ParseError):
        fileio.parse_sequence("== step 1 ==\n0 0 1 1\n")  # steps must start at 0
    with pytest.raises(ParseError):
        # step 1 uses a point that step 0 does not have
        fileio.parse_sequence(
            "== step 0 ==\n0 0 1 1\n2 0 3 1\n== step 1 ==\n0 0 9 9\n2 0 3 1\n"
        )


# ---------------------------------------------------------------------------
# SVG rendering


def test_render_layers_and_determinism():
    m = gen_random_matching(3, 8)
    a = svg_render.render_matching(m, layers=svg_render.LAYERS)
    b = svg_render.render_matching(m, layers=svg_render.LAYERS)
    assert a == b
    root = ElementTree.fromstring(a)
    tags = [child.tag.split("}")[1] for child in root]
    # 4 cells, rays, 3 segments + 6 points, dual polylines + cell dots
    assert tags.count("polygon") == 4
    assert tags.count("polyline") == 6
    assert any(t == "line" for t in tags)


def test_render_single_segment_two_cells():
    ps = PointSet.from_coords([(0, 0), (4, 1)])
    m = Matching(ps, [Segment(0, 1)])
    svg = svg_render.render_matching(m, layers=("cells", "extensions"))
    root = ElementTree.fromstring(svg)
    cells = [c for c in root if c.tag.endswith("polygon")]
    assert len(cells) == 2


def test_render_sequence_shares_viewport():
    m = gen_random_matching(2, 5)
    cat = enumerate_ncpm(m.base)
    other = next(c for c in cat if set(c.edges) != set(m.edges))
    seq = transform(m, other)
    pages = svg_render.render_sequence(seq)
    views = {ElementTree.fromstring(p).get("viewBox") for p in pages}
    assert len(pages) == seq.length + 1
    assert len(views) == 1


def test_render_rejects_unknown_layer():
    m = gen_random_matching(1, 0)
    with pytest.raises(Exception):
        svg_render.render_matching(m, layers=("segments", "shadows"))


# ---------------------------------------------------------------------------
# command-line surface


def write_instance(tmp_path, name, m):
    path = tmp_path / name
    fileio.save_instance(m, path)
    return str(path)


def test_cli_validate_good_and_bad(tmp_path, capsys):
    good = tmp_path / "good.txt"
    good.write_text("0 0 2 2\n4 0 6 3\n")
    assert main(["validate", str(good)]) == 0
    assert "perfect, non-crossing" in capsys.readouterr().out

    crossing = tmp_path / "crossing.txt"
    crossing.write_text("0 0 2 2\n0 2 2 0\n")
    assert main(["validate", str(crossing)]) == 1
    assert "cross" in capsys.readouterr().err

    collinear = tmp_path / "collinear.txt"
    collinear.write_text("0 0 1 1\n2 2 5 9\n")
    assert main(["validate", str(collinear)]) == 1
    assert "collinear" in capsys.readouterr().err

    broken = tmp_path / "broken.txt"
    broken.write_text("1 2 3\n")
    assert main(["validate", str(broken)]) == 2
    assert main(["validate", str(tmp_path / "missing.txt")]) == 2


def test_cli_gen_then_validate(tmp_path):
    for flavor, n in [("random", 3), ("hv", 4), ("chc", 3), ("parallel-chords", 3), ("general-odd", 1)]:
        out = tmp_path / f"{flavor}.txt"
        assert main(["gen", flavor, str(n), "--seed", "6", "--out", str(out)]) == 0
        assert main(["validate", str(out)]) == 0


def test_cli_gen_seed_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("GEOMATCH_SEED", "17")
    assert main(["gen", "random", "2"]) == 0
    from_env = capsys.readouterr().out
    assert main(["gen", "random", "2", "--seed", "17"]) == 0
    assert capsys.readouterr().out == from_env


def test_cli_transform_run(tmp_path, capsys):
    m = gen_random_matching(4, 13)
    cat = enumerate_ncpm(m.base)
    other = next(c for c in cat if set(c.edges) != set(m.edges))
    a = write_instance(tmp_path, "a.txt", m)
    b = write_instance(tmp_path, "b.txt", other)
    seq_path = tmp_path / "seq.txt"
    code = main(
        ["run", "transform", a, b, "--verify", "--oracle", "--out", str(seq_path)]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "oracle: exact distance" in out
    seq = fileio.load_sequence(seq_path)
    assert seq.length <= 2 * math.ceil(math.log2(4))


def test_cli_transform_shear_flag(tmp_path, capsys):
    ps = PointSet.from_coords([(0, 0), (0, 4), (3, 1), (3, 5)])
    a = write_instance(tmp_path, "a.txt", Matching(ps, [Segment(0, 1), Segment(2, 3)]))
    b = write_instance(tmp_path, "b.txt", Matching(ps, [Segment(0, 2), Segment(1, 3)]))
    assert main(["run", "transform", a, b]) == 1
    capsys.readouterr()
    assert main(["run", "transform", a, b, "--shear", "--verify"]) == 0
    assert "sheared" in capsys.readouterr().out


def test_cli_hv_and_four_fifths(tmp_path, capsys):
    hv_in = write_instance(
        tmp_path, "hv.txt", gen_random_matching(4, 3, "axis-parallel")
    )
    out = tmp_path / "hv_out.txt"
    assert main(["run", "hv", hv_in, "--verify", "--out", str(out)]) == 0
    assert "spanning tree" in capsys.readouterr().out
    assert main(["validate", str(out)]) == 0

    ff_in = write_instance(tmp_path, "ff.txt", gen_random_matching(10, 3))
    assert main(["run", "four-fifths", ff_in, "--verify"]) == 0
    assert "guarantee 8" in capsys.readouterr().out


def test_cli_crossings_writes_both_halves(tmp_path):
    inst = write_instance(tmp_path, "c.txt", gen_random_matching(4, 19))
    assert main(["run", "crossings", inst, "--verify", "--out", str(tmp_path / "x.txt")]) == 0
    assert main(["validate", str(tmp_path / "x.left.txt")]) == 0
    assert main(["validate", str(tmp_path / "x.right.txt")]) == 0


def test_cli_run_surfaces_precondition_failures(tmp_path, capsys):
    odd = write_instance(tmp_path, "odd.txt", gen_random_matching(3, 1))
    assert main(["run", "four-fifths", odd]) == 1
    assert "even" in capsys.readouterr().err
    slanted = write_instance(tmp_path, "gen.txt", gen_random_matching(2, 1))
    assert main(["run", "hv", slanted]) == 1


def test_cli_render_instance_and_sequence(tmp_path):
    m = gen_random_matching(2, 4)
    inst = write_instance(tmp_path, "m.txt", m)
    svg = tmp_path / "m.svg"
    assert main(["render", inst, str(svg), "--layers", "segments,cells,dual"]) == 0
    ElementTree.parse(svg)

    cat = enumerate_ncpm(m.base)
    other = next(c for c in cat if set(c.edges) != set(m.edges))
    seq = transform(m, other)
    seq_path = tmp_path / "seq.txt"
    fileio.save_sequence(seq, seq_path)
    assert main(["render", str(seq_path), str(tmp_path / "s.svg")]) == 0
    for k in range(seq.length + 1):
        ElementTree.parse(tmp_path / f"s.step{k}.svg")
