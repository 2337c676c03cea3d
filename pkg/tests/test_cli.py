import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from realslice.cli import JobSpec, job_from_args, main, run_job
from realslice.errors import EmptyWindow, ExhaustedRetries, MalformedInput
from realslice.generate import gen_instance, gen_random
from realslice.linking import OrientedLine
from realslice.poly import parse_poly
from realslice.report import SCHEMA, payload
from realslice.slices import certify_slice
from realslice.svg import emit_svg

CONIC = "x^2+y^2-z^2; x*y"
LINE = "1,0,0; 0,1,0"


def _run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_verify_conic(capsys):
    code, rep = _run(capsys, "verify", "--pencil", CONIC, "--line", LINE)
    assert code == 0 and rep["schema"] == SCHEMA
    assert rep["result"]["residual"] == "0"
    assert rep["result"]["h_dot_v"] == 1 and rep["result"]["lk_chart"] == "0"


def test_link_calibration_and_orientation(capsys):
    code, rep = _run(capsys, "link", "--pencil", "x; y", "--line", LINE)
    assert code == 0 and rep["result"]["lk_chart"] == rep["result"]["lk_boundary"] == "1/2"
    code, rep = _run(capsys, "link", "--pencil", "x; y", "--line", LINE, "--orient", "-1")
    assert rep["result"]["lk_chart"] == "-1/2"


def test_solve_and_certify(capsys):
    code, rep = _run(capsys, "solve", "--pencil", CONIC)
    assert code == 0 and len(rep["result"]["points"]) == 4
    code, rep = _run(capsys, "certify", "--pencil", CONIC)
    assert code == 0 and sorted(p["det_sign"] for p in rep["result"]["points"]) == [-1, -1, 1, 1]


def test_certify_tangent_point_is_domain_error(capsys):
    code, rep = _run(capsys, "certify", "--pencil", "x^2+y^2-z^2; (y-z)*x")
    assert code == 3
    err = rep["error"]
    assert err["type"] == "SingularOrTangent" and err["module"] == "solve"
    assert "box" in json.dumps(err)


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--pencil", "x^2 + y; x*y", "--line", LINE],
        ["verify", "--pencil", CONIC],
        ["verify", "--pencil", CONIC, "--line", "1,0,0"],
        ["frobnicate"],
        ["batch", "--degrees", "0-9"],
        ["solve", "--pencil-file", "/nonexistent/pencil.txt"],
    ],
)
def test_input_errors(capsys, argv):
    code, rep = _run(capsys, *argv)
    assert code == 2 and "error" in rep


def test_domain_errors(capsys):
    code, rep = _run(capsys, "verify", "--pencil", "x; y", "--line", "0,0,1; 1,1,0")
    assert code == 3 and rep["error"]["type"] == "LineMeetsBase"
    code, rep = _run(capsys, "solve", "--pencil", "x^2; x*y")
    assert code == 3 and rep["error"]["type"] == "CommonFactor"


def test_report_deterministic(capsys):
    argv = ["verify", "--pencil", CONIC, "--line", "1,2,3; -1,0,2", "--seed", "4"]
    _, first = _run(capsys, *argv)
    _, second = _run(capsys, *argv)
    assert payload(first) == payload(second)
    assert first["result"]["residual"] == "0"


def test_job_file_and_override(tmp_path, capsys):
    job = tmp_path / "job.txt"
    job.write_text(f"# conic against the line at infinity\ncommand = verify\npencil = {CONIC}\nline = {LINE}\n")
    code, rep = _run(capsys, "--job", str(job))
    assert code == 0 and rep["result"]["h_dot_v"] == 1
    code, rep = _run(capsys, "verify", "--job", str(job), "--orient", "-1")
    assert code == 0 and rep["result"]["h_dot_v"] == 1 and rep["inputs"]["orient"] == -1
    bad = tmp_path / "bad.txt"
    bad.write_text("colour = blue\n")
    code, _ = _run(capsys, "--job", str(bad))
    assert code == 2


def test_pencil_file_and_out(tmp_path, capsys):
    (tmp_path / "p.txt").write_text(CONIC + "\n")
    out = tmp_path / "rep.json"
    code = main(["solve", "--pencil-file", str(tmp_path / "p.txt"), "--out", str(out)])
    assert code == 0 and capsys.readouterr().out == ""
    assert len(json.loads(out.read_text())["result"]["points"]) == 4


def test_job_spec_parsing():
    job = job_from_args(["batch", "--seed", "3", "--count", "5", "--degrees", "2-3"])
    assert (job.command, job.seed, job.count, job.degrees) == ("batch", 3, 5, (2, 3))
    with pytest.raises(MalformedInput):
        job_from_args(["plot", "--window", "1,2,3"])


def test_batch_seed_7(capsys):
    code, rep = _run(capsys, "batch", "--seed", "7", "--count", "50")
    assert code == 0
    rows = rep["result"]["instances"]
    assert len(rows) == 50 and all(r["residual"] == "0" for r in rows)


def test_batch_deterministic_across_workers():
    a = run_job(JobSpec("batch", seed=11, count=6, workers=1))
    b = run_job(JobSpec("batch", seed=11, count=6, workers=3))
    assert payload(a) == payload(b)


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "realslice", "link", "--pencil", "x; y", "--line", LINE],
        capture_output=True,
        text=True,
        check=False,
    )
    assert out.returncode == 0 and json.loads(out.stdout)["result"]["lk_chart"] == "1/2"


# generator -----------------------------------------------------------------------


def test_gen_random_deterministic():
    a, b = gen_random(1, (2, 2)), gen_random(1, (2, 2))
    assert a == b and a[0].degree == 2
    certify_slice(a[0].R, a[0].S)


def test_gen_instance_passes_certification():
    for seed in range(10):
        inst = gen_instance(seed)
        assert certify_slice(inst.pencil.R, inst.pencil.S) == inst.base


def test_gen_errors():
    with pytest.raises(MalformedInput):
        gen_instance(0, (0, 2))
    with pytest.raises(ExhaustedRetries):
        gen_instance(0, (1, 1), retries=0)


# svg --------------------------------------------------------------------------------


def _svg(base, line=None, window=(-2, 2, -2, 2)):
    text = emit_svg(base, line, window)
    return text, ET.fromstring(text.split("\n", 1)[1])


def test_svg_single_point():
    base = certify_slice(parse_poly("x"), parse_poly("y"))
    text, root = _svg(base, OrientedLine((1, 0, 0), (0, 1, 0)))
    ns = "{http://www.w3.org/2000/svg}"
    assert len(root.findall(f"{ns}circle")) == 1
    assert "lk = 1/2" in text
    assert text == emit_svg(base, OrientedLine((1, 0, 0), (0, 1, 0)), (-2, 2, -2, 2))


def test_svg_window_without_points():
    base = certify_slice(parse_poly("x^2+y^2-z^2"), parse_poly("x*y"))
    text, root = _svg(base, window=(5, 6, 5, 6))
    assert "warning: no base points" in text
    assert not root.findall("{http://www.w3.org/2000/svg}circle")


def test_svg_empty_window():
    base = certify_slice(parse_poly("x"), parse_poly("y"))
    with pytest.raises(EmptyWindow):
        emit_svg(base, None, (1, 1, 0, 2))


def test_plot_command(tmp_path, capsys):
    path = tmp_path / "conic.svg"
    code, rep = _run(capsys, "plot", "--pencil", CONIC, "--line", "1,1,0; 0,0,1", "--svg", str(path))
    assert code == 0 and rep["result"]["svg"] == str(path)
    ET.fromstring(path.read_text().split("\n", 1)[1])
    code, rep = _run(capsys, "plot", "--pencil", CONIC, "--window", "0,0,0,1")
    assert code == 2 and rep["error"]["type"] == "EmptyWindow"
