import json

import pytest
from click.testing import CliRunner

from polyboard.cli import main
from polyboard.layout import page_centers
from polyboard.profiles import bundled_data_dir


@pytest.fixture
def runner():
    return CliRunner()


def data(*parts):
    return str(bundled_data_dir().joinpath(*parts))


def test_layout_validate_ok(runner):
    result = runner.invoke(main, ["layout", "validate", data("layouts", "en_qwerty.yaml")])
    assert result.exit_code == 0
    assert "valid" in result.output


def test_layout_validate_bad_file(runner, tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("format_version: 1\nlayout_id: x\n", encoding="utf-8")
    result = runner.invoke(main, ["layout", "validate", str(bad)])
    assert result.exit_code == 1


def test_usage_error_exit_code(runner):
    result = runner.invoke(main, ["layout", "coverage"])  # missing args
    assert result.exit_code == 2


def test_layout_coverage_complete(runner):
    result = runner.invoke(main, [
        "layout", "coverage", data("layouts", "sah_cyrillic.yaml"),
        "--inventory", data("profiles", "sah.yaml"),
    ])
    assert result.exit_code == 0
    assert "complete" in result.output


def test_layout_coverage_incomplete_exits_1(runner):
    result = runner.invoke(main, [
        "layout", "coverage", data("layouts", "ru_cyrillic.yaml"),
        "--inventory", data("profiles", "sah.yaml"),
    ])
    assert result.exit_code == 1
    assert "ҕ" in result.output


def test_layout_render(runner):
    result = runner.invoke(main, ["layout", "render", data("layouts", "gsw_qwertz.yaml")])
    assert result.exit_code == 0
    assert "[ü]" in result.output


def test_layout_generate(runner, tmp_path):
    inventory = tmp_path / "inv.yaml"
    inventory.write_text(
        'language_tag: "kr"\nrequired: ['
        + ", ".join(f'"{c}"' for c in "abcdefghijklmnopqrstuvwxyzə")
        + "]\n",
        encoding="utf-8",
    )
    corpus = tmp_path / "corpus.txt"
    corpus.write_text("kəla wude nəm kəla\n" * 50, encoding="utf-8")
    out = tmp_path / "layout.yaml"
    result = runner.invoke(main, [
        "layout", "generate", "--grid", "qwerty",
        "--inventory", str(inventory), "--corpus", str(corpus),
        "-o", str(out),
    ])
    assert result.exit_code == 0, result.output
    check = runner.invoke(main, ["layout", "coverage", str(out), "--inventory", str(inventory)])
    assert check.exit_code == 0


def test_corpus_normalize_train_suggest(runner, tmp_path):
    raw = tmp_path / "raw.txt"
    raw.write_text("The cat sat!\nthe cat ran http://x.y\nthe dog sat\n", encoding="utf-8")
    tokens = tmp_path / "tokens.txt"
    report = tmp_path / "report.txt"
    result = runner.invoke(main, [
        "corpus", "normalize", str(raw), "--profile", data("profiles", "en.yaml"),
        "-o", str(tokens), "--report", str(report),
    ])
    assert result.exit_code == 0, result.output
    assert "url" in report.read_text()

    model = tmp_path / "en.lm"
    result = runner.invoke(main, [
        "corpus", "train", str(raw), "--profile", data("profiles", "en.yaml"),
        "--order", "2", "-o", str(model),
    ])
    assert result.exit_code == 0, result.output

    result = runner.invoke(main, [
        "suggest", "--model", str(model), "--profile", data("profiles", "en.yaml"),
        "--context", "the", "-k", "2",
    ])
    assert result.exit_code == 0
    assert "cat" in result.output


def test_decode_simulate(runner, tmp_path):
    raw = tmp_path / "raw.txt"
    raw.write_text("the cat sat\n" * 30, encoding="utf-8")
    model = tmp_path / "en.lm"
    runner.invoke(main, [
        "corpus", "train", str(raw), "--profile", data("profiles", "en.yaml"),
        "--order", "2", "-o", str(model),
    ])
    from polyboard.profiles import bundled_layouts

    centers = page_centers(bundled_layouts()["en_qwerty"])
    lines = []
    for ch in "cat":
        x, y = centers[ch]
        lines.append(f"{x} {y} tap")
    lines.append("0 0 space")
    taps = tmp_path / "taps.txt"
    taps.write_text("\n".join(lines) + "\n", encoding="utf-8")
    result = runner.invoke(main, [
        "decode", "simulate",
        "--layout", data("layouts", "en_qwerty.yaml"),
        "--model", str(model),
        "--profile", data("profiles", "en.yaml"),
        "--taps", str(taps),
    ])
    assert result.exit_code == 0, result.output
    assert "committed: cat" in result.output


def test_spellcheck_cli(runner, tmp_path):
    lexicon = tmp_path / "lex.tsv"
    lexicon.write_text("the\t100\nten\t50\ntea\t25\n", encoding="utf-8")
    ok = runner.invoke(main, ["spellcheck", "--word", "the", "--lexicon", str(lexicon)])
    assert ok.exit_code == 0 and "ok" in ok.output
    flagged = runner.invoke(main, ["spellcheck", "--word", "teh", "--lexicon", str(lexicon)])
    assert flagged.exit_code == 0 and "flagged" in flagged.output
    assert "the" in flagged.output


def test_mix_cli(runner, tmp_path):
    for tag, text in [("en", "water is good\n" * 20), ("fy", "wetter is goed\n" * 20)]:
        raw = tmp_path / f"{tag}.txt"
        raw.write_text(text, encoding="utf-8")
        runner.invoke(main, [
            "corpus", "train", str(raw), "--profile", data("profiles", "en.yaml"),
            "--order", "2", "-o", str(tmp_path / f"{tag}.lm"),
        ])
    result = runner.invoke(main, [
        "mix", "--models", str(tmp_path / "en.lm"), "--models", str(tmp_path / "fy.lm"),
        "--weights", "0.6,0.4", "--query", "water",
    ])
    assert result.exit_code == 0, result.output
    assert "P(water)" in result.output


def test_mix_cross_script_exits_1(runner, tmp_path):
    en_raw = tmp_path / "en.txt"
    en_raw.write_text("water is good\n" * 5, encoding="utf-8")
    ru_raw = tmp_path / "ru.txt"
    ru_raw.write_text("вода хорошая\n" * 5, encoding="utf-8")
    runner.invoke(main, ["corpus", "train", str(en_raw), "--profile",
                         data("profiles", "en.yaml"), "--order", "1",
                         "-o", str(tmp_path / "en.lm")])
    runner.invoke(main, ["corpus", "train", str(ru_raw), "--profile",
                         data("profiles", "ru.yaml"), "--order", "1",
                         "-o", str(tmp_path / "ru.lm")])
    result = runner.invoke(main, [
        "mix", "--models", str(tmp_path / "en.lm"), "--models", str(tmp_path / "ru.lm"),
    ])
    assert result.exit_code == 1
    assert "CrossScriptMix" in result.output


def test_personal_roundtrip_cli(runner, tmp_path):
    src = tmp_path / "in.dict"
    src.write_text("polyboard-personal v1\nfoo\t3\t100\n\\blocklist\\\n", encoding="utf-8")
    user_dir = tmp_path / "user"
    result = runner.invoke(main, ["personal", "import", "--language", "en",
                                  "--user-dir", str(user_dir), str(src)])
    assert result.exit_code == 0, result.output
    out = tmp_path / "out.dict"
    result = runner.invoke(main, ["personal", "export", "--language", "en",
                                  "--user-dir", str(user_dir), str(out)])
    assert result.exit_code == 0
    assert "foo\t3\t100" in out.read_text()
    result = runner.invoke(main, ["personal", "clear", "--language", "en",
                                  "--user-dir", str(user_dir)])
    assert result.exit_code == 0
    assert not (user_dir / "personal" / "en.dict").exists()


def test_registry_score_and_dashboard(runner, tmp_path):
    result = runner.invoke(main, ["registry", "score"])
    assert result.exit_code == 0
    assert "sah" in result.output and "bucket=" in result.output

    result = runner.invoke(main, ["registry", "score", "sah"])
    assert result.exit_code == 0 and "sah" in result.output

    result = runner.invoke(main, ["registry", "dashboard", "--subtask", "layout_designed"])
    assert result.exit_code == 0
    assert "layout_designed" in result.output

    out_dir = tmp_path / "dash"
    result = runner.invoke(main, ["registry", "dashboard", "--out-dir", str(out_dir)])
    assert result.exit_code == 0
    assert (out_dir / "dashboard.tsv").exists()
    assert (out_dir / "status_by_subtask.png").exists()
    assert (out_dir / "pending_by_bucket.png").exists()


def test_corpus_wordlist(runner, tmp_path):
    raw = tmp_path / "raw.txt"
    raw.write_text("a b a c\n", encoding="utf-8")
    out = tmp_path / "wl.tsv"
    result = runner.invoke(main, ["corpus", "wordlist", str(raw),
                                  "--profile", data("profiles", "en.yaml"),
                                  "-o", str(out)])
    assert result.exit_code == 0
    assert "a\t2" in out.read_text()
