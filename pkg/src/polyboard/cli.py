"""Unified command line: layouts, corpora, decoding, registry, service.

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import __version__
from .autogen import AutogenOptions, char_frequencies, generate_layout
from .decoder import SpatialModel, TapEvent, commit_policy, decode_word, next_words
from .errors import PolyboardError
from .layout import coverage_report, load_layout, render_layout, save_layout
from .mixer import mix as mix_models
from .ngram import TrainParams, load_model_file, save_model, train_ngram
from .normalize import build_wordlist, load_wordlist, normalize
from .personal import PersonalDict
from .profiles import load_inventory, load_profile, user_data_dir
from .registry import dashboard_report, load_registry, priority_score
from .spell import SpellIndex, spell_check


class _Fail(click.ClickException):
    exit_code = 1


def _guard(fn):
    """Map engine errors to exit code 1 with a clean message."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PolyboardError as exc:
            raise _Fail(f"{type(exc).__name__}: {exc}") from exc

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@click.group()
@click.version_option(__version__, prog_name="polyboard")
def main():
    """Multilingual keyboard engine."""


# ---------------------------------------------------------------------------
# layout
# ---------------------------------------------------------------------------

@main.group()
def layout():
    """Layout files: validate, coverage, render, generate."""


@layout.command("validate")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@_guard
def layout_validate(file: Path):
    lay = load_layout(file)
    pages = len(lay.pages)
    keys = sum(len(p.keys) for p in lay.pages)
    click.echo(f"{lay.layout_id}: valid ({pages} pages, {keys} keys, {len(lay.dynamic_rules)} rules)")


@layout.command("coverage")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--inventory", "inventory_file", required=True,
              type=click.Path(exists=True, path_type=Path),
              help="Inventory or profile file.")
@_guard
def layout_coverage(file: Path, inventory_file: Path):
    lay = load_layout(file)
    inventory = load_inventory(inventory_file)
    report = coverage_report(lay, inventory)
    click.echo(report.to_text())
    if not report.complete:
        raise _Fail(f"{len(report.missing)} required graphemes unreachable")


@layout.command("render")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--text", default="", help="Committed text for dynamic rules.")
@click.option("--page", default=0, show_default=True)
@click.option("--shift", is_flag=True)
@_guard
def layout_render(file: Path, text: str, page: int, shift: bool):
    click.echo(render_layout(load_layout(file), committed_text=text, shift=shift, page=page))


@layout.command("generate")
@click.option("--grid", default="qwerty", show_default=True,
              type=click.Choice(["qwerty", "azerty", "qwertz"]))
@click.option("--inventory", "inventory_file", required=True,
              type=click.Path(exists=True, path_type=Path))
@click.option("--corpus", "corpus_file", required=True,
              type=click.Path(exists=True, path_type=Path),
              help="Normalized corpus, one sentence per line.")
@click.option("--threshold", default=0.02, show_default=True,
              help="Relative frequency above which a grapheme gets a standalone key.")
@click.option("--fallback-host", default="e", show_default=True)
@click.option("--max-long-press", default=6, show_default=True)
@click.option("-o", "--output", required=True, type=click.Path(path_type=Path))
@_guard
def layout_generate(grid, inventory_file, corpus_file, threshold, fallback_host,
                    max_long_press, output):
    inventory = load_inventory(inventory_file)
    tokens = corpus_file.read_text(encoding="utf-8").split()
    freqs = char_frequencies(tokens, inventory)
    options = AutogenOptions(
        base_grid=grid,
        standalone_threshold=threshold,
        fallback_host_key=fallback_host,
        max_long_press_per_key=max_long_press,
    )
    lay = generate_layout(options, inventory, freqs)
    save_layout(lay, output)
    click.echo(f"wrote {lay.layout_id} to {output}")


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

@main.group()
def corpus():
    """Corpus normalization and model training."""


@corpus.command("normalize")
@click.argument("input_file", type=click.Path(exists=True, path_type=Path))
@click.option("--profile", "profile_file", required=True,
              type=click.Path(exists=True, path_type=Path))
@click.option("-o", "--output", type=click.Path(path_type=Path),
              help="Token output, one sentence per line (default stdout).")
@click.option("--report", "report_file", type=click.Path(path_type=Path),
              help="Where to write the rejection report.")
@_guard
def corpus_normalize(input_file, profile_file, output, report_file):
    profile = load_profile(profile_file)
    result = normalize(input_file.read_text(encoding="utf-8"), profile)
    text = "\n".join(" ".join(s) for s in result.sentences) + "\n"
    if output:
        output.write_text(text, encoding="utf-8")
        click.echo(f"wrote {len(result.sentences)} sentences to {output}")
    else:
        click.echo(text, nl=False)
    if report_file:
        report_file.write_text(result.report.to_text() + "\n", encoding="utf-8")
    else:
        click.echo(result.report.to_text(), err=True)


@corpus.command("train")
@click.argument("input_file", type=click.Path(exists=True, path_type=Path))
@click.option("--profile", "profile_file", required=True,
              type=click.Path(exists=True, path_type=Path))
@click.option("--order", default=3, show_default=True)
@click.option("--discount", default=0.75, show_default=True)
@click.option("--vocab-cap", default=50_000, show_default=True)
@click.option("-o", "--output", required=True, type=click.Path(path_type=Path))
@_guard
def corpus_train(input_file, profile_file, order, discount, vocab_cap, output):
    profile = load_profile(profile_file)
    result = normalize(input_file.read_text(encoding="utf-8"), profile)
    model = train_ngram(
        result.sentences,
        order,
        TrainParams(discount=discount, vocab_cap=vocab_cap),
        language_tag=profile.language_tag,
        script=profile.everyday_script,
    )
    save_model(model, output)
    click.echo(
        f"trained order-{order} model on {model.token_count} tokens, "
        f"vocab {len(model.vocabulary)}; wrote {output}"
    )


# ---------------------------------------------------------------------------
# decode / suggest / spellcheck
# ---------------------------------------------------------------------------

@main.group()
def decode():
    """Decoding against a layout and model."""


@decode.command("simulate")
@click.option("--layout", "layout_file", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--model", "model_file", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--profile", "profile_file", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--taps", "taps_file", required=True, type=click.Path(exists=True, path_type=Path),
              help="One event per line: 'x y kind [index]'; kind in tap/long_press_select/space/commit.")
@_guard
def decode_simulate(layout_file, model_file, profile_file, taps_file):
    lay = load_layout(layout_file)
    model = load_model_file(model_file)
    profile = load_profile(profile_file)
    spatial = SpatialModel(lay)
    committed: list[str] = []
    pending: list[TapEvent] = []
    for number, line in enumerate(taps_file.read_text(encoding="utf-8").splitlines(), 1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) < 3:
            raise _Fail(f"taps line {number}: expected 'x y kind'")
        x, y, kind = float(fields[0]), float(fields[1]), fields[2]
        if kind in ("space", "commit"):
            if pending:
                suggestions = decode_word(pending, committed, model, spatial, profile)
                word = commit_policy(suggestions, profile)
                committed.append(word)
                trace = "  ".join(f"{s.surface}:{s.score:.3f}:{s.kind}" for s in suggestions)
                click.echo(f"word {len(committed)}: {word}\t[{trace}]")
                pending = []
        else:
            index = int(fields[3]) if len(fields) > 3 else None
            pending.append(TapEvent(x=x, y=y, timestamp=number, kind=kind, index=index))
    if pending:
        suggestions = decode_word(pending, committed, model, spatial, profile)
        word = commit_policy(suggestions, profile)
        committed.append(word)
        trace = "  ".join(f"{s.surface}:{s.score:.3f}:{s.kind}" for s in suggestions)
        click.echo(f"word {len(committed)}: {word}\t[{trace}]")
    click.echo("committed: " + " ".join(committed))


@main.command("suggest")
@click.option("--model", "model_file", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--profile", "profile_file", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--context", default="", help="Preceding words.")
@click.option("-k", default=3, show_default=True)
@_guard
def suggest(model_file, profile_file, context, k):
    model = load_model_file(model_file)
    profile = load_profile(profile_file)
    for s in next_words(context.split(), model, profile, k=k):
        click.echo(f"{s.surface}\t{s.score:.4f}\t{s.kind}")


@main.command("spellcheck")
@click.option("--word", required=True)
@click.option("--lexicon", "lexicon_file", required=True,
              type=click.Path(exists=True, path_type=Path))
@click.option("--personal", "personal_file", type=click.Path(exists=True, path_type=Path))
@click.option("--profile", "profile_file", type=click.Path(exists=True, path_type=Path))
@_guard
def spellcheck(word, lexicon_file, personal_file, profile_file):
    lexicon = load_wordlist(lexicon_file)
    personal = PersonalDict.load(personal_file) if personal_file else None
    profile = load_profile(profile_file) if profile_file else None
    result = spell_check(word, lexicon, personal=personal, profile=profile)
    if not result.flagged:
        click.echo(f"{word}: ok")
    else:
        click.echo(f"{word}: flagged; suggestions: {' '.join(result.suggestions) or '(none)'}")


# ---------------------------------------------------------------------------
# mix
# ---------------------------------------------------------------------------

@main.command("mix")
@click.option("--models", "model_files", required=True, multiple=True,
              type=click.Path(exists=True, path_type=Path),
              help="Repeatable: one per component model.")
@click.option("--weights", default="", help="Comma-separated, defaults to uniform.")
@click.option("--query", default="", help="Optionally score a word under the mixture.")
@_guard
def mix_cmd(model_files, weights, query):
    models = [load_model_file(p) for p in model_files]
    weight_list = None
    if weights:
        weight_list = [float(w) for w in weights.split(",")]
    mixed = mix_models(models, weight_list)
    parts = ", ".join(
        f"{c.language_tag}={w:.3f}" for c, w in zip(mixed.components, mixed.weights)
    )
    click.echo(f"mixed [{parts}] script={mixed.script} vocab={len(mixed.vocabulary)}")
    if query:
        click.echo(f"P({query}) = {mixed.prob(query):.6g}")
    else:
        top = ", ".join(mixed.top_unigrams(5))
        click.echo(f"top unigrams: {top}")


# ---------------------------------------------------------------------------
# personal
# ---------------------------------------------------------------------------

@main.group()
def personal():
    """Personal dictionary import/export."""


def _personal_path(language: str, user_dir: Path | None) -> Path:
    base = user_dir or user_data_dir()
    return base / "personal" / f"{language}.dict"


@personal.command("export")
@click.option("--language", required=True)
@click.option("--user-dir", type=click.Path(path_type=Path))
@click.argument("output", type=click.Path(path_type=Path))
@_guard
def personal_export(language, user_dir, output):
    path = _personal_path(language, user_dir)
    if not path.exists():
        raise _Fail(f"no personal dictionary at {path}")
    PersonalDict.load(path).save(output)
    click.echo(f"exported to {output}")


@personal.command("import")
@click.option("--language", required=True)
@click.option("--user-dir", type=click.Path(path_type=Path))
@click.argument("input_file", type=click.Path(exists=True, path_type=Path))
@_guard
def personal_import(language, user_dir, input_file):
    pdict = PersonalDict.load(input_file)
    path = _personal_path(language, user_dir)
    path.parent.mkdir(parents=True, exist_ok=True)
    pdict.save(path)
    click.echo(f"imported {len(pdict.words)} words, {len(pdict.blocklist)} blocklist pairs")


@personal.command("clear")
@click.option("--language", required=True)
@click.option("--user-dir", type=click.Path(path_type=Path))
@_guard
def personal_clear(language, user_dir):
    path = _personal_path(language, user_dir)
    if path.exists():
        path.unlink()
        click.echo(f"cleared {path}")
    else:
        click.echo("nothing to clear")


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

@main.group()
def registry():
    """Language roadmap registry."""


def _registry_dir(registry_dir: Path | None) -> Path:
    if registry_dir:
        return registry_dir
    from .profiles import bundled_data_dir

    return bundled_data_dir() / "registry"


@registry.command("score")
@click.argument("tag", required=False)
@click.option("--registry", "registry_dir", type=click.Path(exists=True, path_type=Path))
@_guard
def registry_score(tag, registry_dir):
    records, _ = load_registry(_registry_dir(registry_dir))
    rows = []
    for record_tag, record in records.items():
        if tag and record_tag != tag:
            continue
        score, bucket = priority_score(record)
        rows.append((bucket, -score, record_tag, score))
    if tag and not rows:
        raise _Fail(f"no registry record for {tag!r}")
    for bucket, _, record_tag, score in sorted(rows):
        click.echo(f"{record_tag}\tscore={score:.3f}\tbucket={bucket}")


@registry.command("dashboard")
@click.option("--subtask", "subtask_filter", default="")
@click.option("--registry", "registry_dir", type=click.Path(exists=True, path_type=Path))
@click.option("--out-dir", type=click.Path(path_type=Path),
              help="Write dashboard.tsv plus PNG figures here instead of stdout.")
@_guard
def registry_dashboard(subtask_filter, registry_dir, out_dir):
    records, statuses = load_registry(_registry_dir(registry_dir))
    report = dashboard_report(records, statuses)
    if subtask_filter:
        boards = tuple(b for b in report.boards if b.subtask == subtask_filter)
        if not boards:
            raise _Fail(f"unknown subtask {subtask_filter!r}")
        report = type(report)(boards=boards)
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
        tsv_path = out_dir / "dashboard.tsv"
        tsv_path.write_text(report.to_tsv(), encoding="utf-8")
        figures = report.save_figures(out_dir)
        click.echo(f"wrote {tsv_path}")
        for fig in figures:
            click.echo(f"wrote {fig}")
    else:
        click.echo(report.to_text())


# ---------------------------------------------------------------------------
# wordlist helper + serve
# ---------------------------------------------------------------------------

@corpus.command("wordlist")
@click.argument("input_file", type=click.Path(exists=True, path_type=Path))
@click.option("--profile", "profile_file", required=True,
              type=click.Path(exists=True, path_type=Path))
@click.option("-o", "--output", required=True, type=click.Path(path_type=Path))
@_guard
def corpus_wordlist(input_file, profile_file, output):
    profile = load_profile(profile_file)
    result = normalize(input_file.read_text(encoding="utf-8"), profile)
    wordlist = build_wordlist(result.tokens(), source=str(input_file))
    wordlist.save(output)
    click.echo(f"wrote {len(wordlist)} words to {output}")


@main.command("serve")
@click.option("--port", type=int, help="TCP port (omit for stdio).")
@click.option("--user-dir", type=click.Path(path_type=Path))
@click.option("--models-dir", type=click.Path(exists=True, path_type=Path))
@_guard
def serve_cmd(port, user_dir, models_dir):
    from .service import serve

    serve(port=port, user_dir=user_dir, models_dir=models_dir)


if __name__ == "__main__":
    main()
