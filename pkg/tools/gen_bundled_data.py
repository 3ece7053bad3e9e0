#!/usr/bin/env python3
"""Regenerate the bundled language assets under src/polyboard/data/.

Layouts are built programmatically so grid geometry stays consistent, then
written through the deterministic serializer. Profiles and registry entries
are emitted as YAML. Demo corpora are small synthetic texts: just enough for
the session service to train usable demo models.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from polyboard.layout import DynamicRule, Key, Layout, Page, save_layout  # noqa: E402

DATA = ROOT / "src" / "polyboard" / "data"

LOWER = "abcdefghijklmnopqrstuvwxyz"


def q(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def grid_keys(rows, width=0.1, shift_caps=True, long_press=None):
    long_press = long_press or {}
    keys = []
    for r, row in enumerate(rows):
        for c, ch in enumerate(row):
            keys.append(
                Key(
                    key_id=ch,
                    row=r,
                    col=c,
                    width=width,
                    base_output=ch,
                    shift_output=ch.upper() if shift_caps and ch.upper() != ch else None,
                    long_press=tuple(long_press.get(ch, ())),
                    face=ch,
                )
            )
    return keys


DIGIT_LP = {ch: (str((i + 1) % 10),) for i, ch in enumerate("qwertyuiop")}


def latin_layout(layout_id, tag, grid, rows, extra_keys=(), long_press=None):
    lp = dict(DIGIT_LP)
    for host, entries in (long_press or {}).items():
        lp[host] = tuple(entries) + lp.get(host, ())
    keys = grid_keys(rows, long_press=lp)
    keys.extend(extra_keys)
    return Layout(
        layout_id=layout_id,
        language_tag=tag,
        script="Latn",
        base_grid=grid,
        pages=(Page(keys=tuple(keys)),),
    )


def standalone(ch, row, col, width=0.1):
    return Key(
        key_id=ch,
        row=row,
        col=col,
        width=width,
        base_output=ch,
        shift_output=ch.upper() if ch.upper() != ch else None,
        face=ch,
    )


QWERTY = ("qwertyuiop", "asdfghjkl", "zxcvbnm")
QWERTZ = ("qwertzuiop", "asdfghjkl", "yxcvbnm")

# --- Latin layouts ----------------------------------------------------------

en_qwerty = latin_layout("en_qwerty", "en", "qwerty", QWERTY)
id_qwerty = latin_layout("id_qwerty", "id", "qwerty", QWERTY)

# German of Switzerland: umlauts as standalone keys right of the QWERTZ grid.
gsw_qwertz = latin_layout(
    "gsw_qwertz",
    "gsw",
    "qwertz",
    QWERTZ,
    extra_keys=[
        standalone("ü", 0, 10),
        standalone("ö", 1, 9),
        standalone("ä", 1, 10),
    ],
    long_press={"e": ("é", "è"), "a": ("à",)},
)

# Kanuri: schwa earns a standalone key; q/v/x stay for loanwords.
kr_qwerty = latin_layout(
    "kr_qwerty",
    "kr",
    "qwerty",
    QWERTY,
    extra_keys=[standalone("ə", 1, 9)],
)

# --- Cyrillic ----------------------------------------------------------------

RU_ROWS = ("йцукенгшщзх", "фывапролджэ", "ячсмитьбю")
RU_LP = {"е": ("ё", "Ё"), "ь": ("ъ", "Ъ")}


def cyrillic_layout(layout_id, tag, extra_keys=()):
    keys = []
    for r, row in enumerate(RU_ROWS):
        for c, ch in enumerate(row):
            keys.append(
                Key(
                    key_id=ch,
                    row=r,
                    col=c,
                    width=1.0 / 12,
                    base_output=ch,
                    shift_output=ch.upper(),
                    long_press=tuple(RU_LP.get(ch, ())),
                    face=ch,
                )
            )
    keys.extend(extra_keys)
    return Layout(
        layout_id=layout_id,
        language_tag=tag,
        script="Cyrl",
        base_grid="script_native",
        pages=(Page(keys=tuple(keys)),),
    )


ru_cyrillic = cyrillic_layout("ru_cyrillic", "ru")


def cyr_standalone(ch, row, col):
    return Key(
        key_id=ch,
        row=row,
        col=col,
        width=1.0 / 12,
        base_output=ch,
        shift_output=ch.upper(),
        face=ch,
    )


# Sakha: the five letters missing from Russian-only layouts, as real keys.
sah_cyrillic = cyrillic_layout(
    "sah_cyrillic",
    "sah",
    extra_keys=[
        cyr_standalone("ҕ", 0, 11),
        cyr_standalone("ҥ", 1, 11),
        cyr_standalone("ө", 2, 9),
        cyr_standalone("һ", 2, 10),
        cyr_standalone("ү", 2, 11),
    ],
)

# --- Devanagari ----------------------------------------------------------------

DEVA_CONSONANTS = list("कखगघङचछजझञटठडढणतथदधनपफबभमयरलवशषसह")
DEVA_VOWELS = list("अआइईउऊऋएऐओऔ")
DEVA_MATRAS = list("ािीुूृेैोौ")
DEVA_SIGNS = ["्", "ं", "ः", "ँ"]


def deva_layout():
    keys = []
    for c, ch in enumerate(DEVA_VOWELS):
        keys.append(Key(key_id=f"v_{ch}", row=0, col=c, width=1.0 / 11,
                        base_output=ch, face=ch))
    rows = [DEVA_CONSONANTS[i : i + 11] for i in range(0, 33, 11)]
    for r, row in enumerate(rows, start=1):
        for c, ch in enumerate(row):
            keys.append(Key(key_id=f"c_{ch}", row=r, col=c, width=1.0 / 11,
                            base_output=ch, face=ch))
    # Sign keys stay blank until a consonant licenses them.
    for c, ch in enumerate(DEVA_MATRAS):
        keys.append(Key(key_id=f"m_{c}", row=4, col=c, width=1.0 / 10,
                        base_output="", face=""))
    for c, ch in enumerate(DEVA_SIGNS):
        keys.append(Key(key_id=f"s_{ch}", row=5, col=c, width=1.0 / 10,
                        base_output=ch, face=ch))
    rules = []
    for c, ch in enumerate(DEVA_MATRAS):
        # Consonant (possibly in a virama cluster) licenses the sign key.
        rules.append(DynamicRule(
            context_pattern="[C]",
            target_key_id=f"m_{c}",
            new_output=ch,
            new_face="{match}" + ch,
        ))
    return Layout(
        layout_id="hi_devanagari",
        language_tag="hi",
        script="Deva",
        base_grid="script_native",
        pages=(Page(keys=tuple(keys)),),
        dynamic_rules=tuple(rules),
        grapheme_classes={"C": tuple(DEVA_CONSONANTS)},
    )


hi_devanagari = deva_layout()


def kr_auto_layout():
    """Autogen output for Kanuri in long-press-only mode (demo of the
    generated-layout path; the hand-tailored kr_qwerty stays the default)."""
    from polyboard.autogen import AutogenOptions, char_frequencies, generate_layout
    from polyboard.layout import CharacterInventory

    inventory = CharacterInventory(
        "kr",
        frozenset(KR_LETTERS) | frozenset(c.upper() for c in KR_LETTERS if c.upper() != c),
        frozenset("qvx") | frozenset("QVX"),
    )
    corpus = (DATA / "corpora" / "kr.txt").read_text(encoding="utf-8").split()
    freqs = char_frequencies(corpus, inventory)
    options = AutogenOptions(standalone_threshold=1.0, fallback_host_key="e")
    return generate_layout(options, inventory, freqs, layout_id="kr_qwerty_auto")


LAYOUTS = [en_qwerty, id_qwerty, gsw_qwertz, kr_qwerty, ru_cyrillic, sah_cyrillic, hi_devanagari]

# --- Profiles -------------------------------------------------------------------

RU_LETTERS = "абвгдеёжзийклмнопрстуфхцчшщъыьэюя"
SAH_EXTRA = "ҕҥөһү"
KR_LETTERS = "abcdeəfghijklmnoprstuwyz"


def cased(letters):
    out = sorted(set(letters))
    out += sorted({ch.upper() for ch in letters if ch.upper() != ch})
    return out


PROFILES = {
    "en": dict(
        name="English", autonym="English", scripts=[("Latn", "everyday")],
        casing="cased", leniency=0.0, reduplication=False, layout="en_qwerty",
        required=cased(LOWER), optional=[],
    ),
    "id": dict(
        name="Indonesian", autonym="bahasa Indonesia", scripts=[("Latn", "everyday")],
        casing="cased", leniency=0.2, reduplication=True, layout="id_qwerty",
        required=cased(LOWER), optional=[],
    ),
    "gsw": dict(
        name="Swiss German", autonym="Schwiizerdütsch", scripts=[("Latn", "everyday")],
        casing="cased", leniency=0.6, reduplication=False, layout="gsw_qwertz",
        required=cased(LOWER + "äöü"), optional=cased("éèà"),
    ),
    "kr": dict(
        name="Kanuri", autonym="Kànùrí", scripts=[("Latn", "everyday")],
        casing="cased", leniency=0.3, reduplication=False, layout="kr_qwerty",
        required=cased(KR_LETTERS), optional=cased("qvx"),
    ),
    "ru": dict(
        name="Russian", autonym="русский", scripts=[("Cyrl", "everyday")],
        casing="cased", leniency=0.0, reduplication=False, layout="ru_cyrillic",
        required=cased(RU_LETTERS), optional=[],
    ),
    "sah": dict(
        name="Sakha (Yakut)", autonym="саха тыла", scripts=[("Cyrl", "everyday")],
        casing="cased", leniency=0.1, reduplication=False, layout="sah_cyrillic",
        required=cased(RU_LETTERS + SAH_EXTRA), optional=[],
    ),
    "hi": dict(
        name="Hindi", autonym="हिन्दी",
        scripts=[("Deva", "everyday"), ("Latn", "heritage")],
        casing="uncased", leniency=0.0, reduplication=False, layout="hi_devanagari",
        required=DEVA_CONSONANTS + DEVA_VOWELS + DEVA_MATRAS + DEVA_SIGNS, optional=[],
    ),
}


def profile_yaml(tag, p):
    lines = [
        "format_version: 1",
        f"language_tag: {q(tag)}",
        f"name: {q(p['name'])}",
        f"autonym: {q(p['autonym'])}",
        "scripts:",
    ]
    for code, usage in p["scripts"]:
        lines.append(f"  - {{code: {q(code)}, usage: {q(usage)}}}")
    lines += [
        f"casing: {q(p['casing'])}",
        f"leniency: {p['leniency']}",
        f"reduplication_enabled: {'true' if p['reduplication'] else 'false'}",
        f"default_layout: {q(p['layout'])}",
        "inventory:",
        "  required: [" + ", ".join(q(g) for g in p["required"]) + "]",
    ]
    if p["optional"]:
        lines.append("  optional_loanword: [" + ", ".join(q(g) for g in p["optional"]) + "]")
    return "\n".join(lines) + "\n"


# --- Registry --------------------------------------------------------------------

REGISTRY = {
    "en": dict(autonym="English", exonym="English", scripts=[("Latn", "everyday")],
               speakers=400_000_000, conf="high",
               factors=dict(online_evidence=3, formal_publications=2, smartphone_trend=2,
                            i18n_ready=True, feature_requests=0,
                            usable_alternative_exists=False, official_status=True),
               status=dict(inventory_defined="done", layout_designed="done",
                           corpus_ready="done", model_trained="done", tested="done",
                           released="done")),
    "ru": dict(autonym="русский", exonym="Russian", scripts=[("Cyrl", "everyday")],
               speakers=150_000_000, conf="high",
               factors=dict(online_evidence=3, formal_publications=2, smartphone_trend=1,
                            i18n_ready=True, feature_requests=0,
                            usable_alternative_exists=False, official_status=True),
               status=dict(inventory_defined="done", layout_designed="done",
                           corpus_ready="done", model_trained="done", tested="done",
                           released="done")),
    "hi": dict(autonym="हिन्दी", exonym="Hindi", scripts=[("Deva", "everyday"), ("Latn", "everyday")],
               speakers=322_000_000, conf="medium",
               factors=dict(online_evidence=3, formal_publications=2, smartphone_trend=2,
                            i18n_ready=True, feature_requests=14,
                            usable_alternative_exists=False, official_status=True),
               status=dict(inventory_defined="done", layout_designed="done",
                           corpus_ready="done", model_trained="done",
                           tested=("in_progress", "priya", "KB-311"), released="todo")),
    "id": dict(autonym="bahasa Indonesia", exonym="Indonesian", scripts=[("Latn", "everyday")],
               speakers=199_000_000, conf="medium",
               factors=dict(online_evidence=3, formal_publications=2, smartphone_trend=2,
                            i18n_ready=True, feature_requests=6,
                            usable_alternative_exists=True, official_status=True),
               status=dict(inventory_defined="done", layout_designed="done",
                           corpus_ready="done", model_trained="done", tested="done",
                           released="done")),
    "gsw": dict(autonym="Schwiizerdütsch", exonym="Swiss German", scripts=[("Latn", "everyday")],
                speakers=5_000_000, conf="medium",
                factors=dict(online_evidence=2, formal_publications=1, smartphone_trend=2,
                             i18n_ready=True, feature_requests=9,
                             usable_alternative_exists=True, official_status=False),
                status=dict(inventory_defined="done", layout_designed="done",
                            corpus_ready="done",
                            model_trained=("in_progress", "lena", "KB-204"),
                            tested="todo", released="todo")),
    "sah": dict(autonym="саха тыла", exonym="Sakha (Yakut)", scripts=[("Cyrl", "everyday")],
                speakers=450_000, conf="medium",
                factors=dict(online_evidence=2, formal_publications=1, smartphone_trend=1,
                             i18n_ready=True, feature_requests=11,
                             usable_alternative_exists=True, official_status=True),
                status=dict(inventory_defined="done",
                            layout_designed=("in_progress", "aisen", "KB-187"),
                            corpus_ready="todo", model_trained="todo",
                            tested="todo", released="todo")),
    "kr": dict(autonym="Kànùrí", exonym="Kanuri", scripts=[("Latn", "everyday"), ("Arab", "heritage")],
               speakers=9_600_000, conf="low",
               factors=dict(online_evidence=1, formal_publications=1, smartphone_trend=2,
                            i18n_ready=True, feature_requests=4,
                            usable_alternative_exists=False, official_status=False),
               status=dict(inventory_defined="done",
                           layout_designed="done",
                           corpus_ready=("in_progress", "musa", "KB-242"),
                           model_trained="todo", tested="todo", released="todo")),
    "fy": dict(autonym="Frysk", exonym="Frisian", scripts=[("Latn", "everyday")],
               speakers=500_000, conf="high",
               factors=dict(online_evidence=2, formal_publications=2, smartphone_trend=1,
                            i18n_ready=True, feature_requests=7,
                            usable_alternative_exists=True, official_status=True),
               status=dict(inventory_defined="done", layout_designed="todo",
                           corpus_ready="todo", model_trained="todo",
                           tested="todo", released="todo")),
    "li": dict(autonym="Limburgs", exonym="Limburgish", scripts=[("Latn", "everyday")],
               speakers=1_000_000, conf="medium",
               factors=dict(online_evidence=2, formal_publications=1, smartphone_trend=1,
                            i18n_ready=True, feature_requests=3,
                            usable_alternative_exists=True, official_status=False),
               status=dict(inventory_defined=("in_progress", "mia", "KB-133"),
                           layout_designed="todo", corpus_ready="todo",
                           model_trained="todo", tested="todo", released="todo")),
    "sat": dict(autonym="ᱥᱟᱱᱛᱟᱲᱤ", exonym="Santali",
                scripts=[("Olck", "everyday"), ("Deva", "heritage"),
                         ("Beng", "heritage"), ("Latn", "heritage")],
                speakers=7_600_000, conf="low",
                factors=dict(online_evidence=1, formal_publications=1, smartphone_trend=1,
                             i18n_ready=False, feature_requests=5,
                             usable_alternative_exists=False, official_status=True),
                status=dict(inventory_defined="todo", layout_designed="todo",
                            corpus_ready="todo", model_trained="todo",
                            tested="todo", released="todo")),
}

DOC_BASE = "docs/playbooks"


def registry_yaml(tag, r):
    lines = [
        "format_version: 1",
        "record:",
        f"  language_tag: {q(tag)}",
        f"  autonym: {q(r['autonym'])}",
        f"  exonym: {q(r['exonym'])}",
        "  scripts:",
    ]
    for code, usage in r["scripts"]:
        lines.append(f"    - {{code: {q(code)}, usage: {q(usage)}}}")
    lines += [
        f"  speaker_estimate: {r['speakers']}",
        f"  speaker_confidence: {q(r['conf'])}",
        "  factors:",
    ]
    for key, value in r["factors"].items():
        if isinstance(value, bool):
            lines.append(f"    {key}: {'true' if value else 'false'}")
        else:
            lines.append(f"    {key}: {value}")
    lines.append("status:")
    for subtask, st in r["status"].items():
        doc = f"{DOC_BASE}/{subtask}.md"
        if isinstance(st, tuple):
            state, owner, issue = st
            lines.append(
                f"  {subtask}: {{state: {q(state)}, owner: {q(owner)}, "
                f"issue_id: {q(issue)}, doc_link: {q(doc)}}}"
            )
        else:
            lines.append(f"  {subtask}: {{state: {q(st)}, doc_link: {q(doc)}}}")
    return "\n".join(lines) + "\n"


# --- Demo corpora -----------------------------------------------------------------

CORPORA = {
    "en": """\
i want to eat something good
we can meet at the market later
she said the weather is nice today
they walk to school every morning
he likes tea more than coffee
the cat sleeps on the warm chair
please send me the photo tonight
we talked about the new song
my friend lives near the river
i will call you after work
the children play in the garden
can you help me with this
that story made everyone laugh
we watch the game on sunday
the bread here is really good
i forgot my keys at home
her sister studies in the city
the bus comes at eight
let us cook dinner together
the music was loud but fun
i read a good book this week
they sell fruit at the corner
the rain stopped before noon
we took many photos there
he writes a message every day
the shop closes early today
i like this place a lot
see you at the usual spot
she found a nice gift for him
we should visit them soon
the coffee is still hot
my phone needs a new battery
the train was full this morning
i heard a funny story today
they painted the door green
the soup needs more salt
we waited for the late bus
the movie starts at nine
he fixed the old bike
she sings in the choir
""",
    "id": """\
aku mau makan nasi goreng
kita makan makan-makan di rumah nenek
mereka jalan jalan-jalan ke pasar malam
dia suka minum teh manis
besok kita pergi ke pantai
ibu masak sayur dan ikan
anak anak-anak bermain di taman
saya belajar bahasa baru
kami makan makan-makan setelah kerja
dia beli buah di pasar
kita nonton film malam ini
mereka duduk duduk-duduk di teras
ayah minum kopi setiap pagi
saya suka lagu ini
kami jalan jalan-jalan di kota tua
dia tulis surat untuk teman
kita masak bersama nanti
mereka main main-main di lapangan
saya mau tidur cepat
besok ada acara keluarga
kami makan nasi di warung
dia foto foto-foto di kebun
kita bicara bicara-bicara sampai malam
saya cari buku di toko
mereka pulang sore ini
""",
    "gsw": """\
grüezi mitenand wie gahts
ich gang hüt hei
s wätter isch schön
mir ässed znacht zäme
er trinkt es kafi
d chind spieled dusse
ich ha kei zyt
mir gönd go lädele
si wohnt z züri
das isch rächt guet
ich lueg es video
er schafft am määntig
mir treffed eus am märt
d musig isch luut
ich bi müed hüt
""",
    "kr": """\
wu kəla nəmgana
andi səla kəndo
kəmbu dəga wuro
nyi kəla bəla
shi dəwu kəri
wu nəm kura
sə kəndə yala
andi wunə dəla
kəri səla mbeji
nyi bəla kəmbu
wu dəga nəmro
shi kura wuno
""",
    "ru": """\
я хочу есть
мы идём домой
сегодня хорошая погода
он читает книгу
она пьёт чай
дети играют во дворе
мы смотрим фильм
я люблю эту песню
завтра будет дождь
он работает в городе
мы едем на поезде
она готовит ужин
я забыл ключи дома
друг живёт рядом
мы говорим по телефону
""",
    "sah": """\
мин сахабын
бу күн үчүгэй
кини үлэлиир
биһиги дьиэбитигэр барабыт
мин үөрэнэбин
эн тугу гынаҕын
кини ыллыыр
биһиги чэй иһэбит
бу дойду үчүгэй
мин аҕам үлэлиир
эн кинигэни ааҕаҕын
кини һарсын кэлиэ
""",
    "hi": """\
मैं खाना खाता हूँ
हम बाजार जाते हैं
वह किताब देखती है
आज मौसम अच्छा है
बच्चे बाहर खेलते हैं
मुझे चाय पसंद है
वे कल आएँगे
हम साथ काम करते हैं
यह गाना सुनो
मैं पानी पीता हूँ
वह घर पर है
हम फिल्म देखते हैं
""",
}


def main():
    for sub in ("layouts", "profiles", "registry", "corpora"):
        (DATA / sub).mkdir(parents=True, exist_ok=True)
    for tag, text in CORPORA.items():
        (DATA / "corpora" / f"{tag}.txt").write_text(text, encoding="utf-8")
        print("corpus", tag)
    for lay in LAYOUTS + [kr_auto_layout()]:
        save_layout(lay, DATA / "layouts" / f"{lay.layout_id}.yaml")
        print("layout", lay.layout_id)
    for tag, p in PROFILES.items():
        (DATA / "profiles" / f"{tag}.yaml").write_text(profile_yaml(tag, p), encoding="utf-8")
        print("profile", tag)
    for tag, r in REGISTRY.items():
        (DATA / "registry" / f"{tag}.yaml").write_text(registry_yaml(tag, r), encoding="utf-8")
        print("registry", tag)


if __name__ == "__main__":
    main()
