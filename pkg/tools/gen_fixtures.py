"""Regenerate the committed test fixtures under tests/fixtures/.

Everything here is deterministic (no timestamps, no unseeded RNG), so
rerunning the script reproduces the committed files byte for byte.
Fixture shape:

* edges.tsv            main category taxonomy (~230 nodes) with a
                       duplicate row, a self-loop, a 2-cycle, and
                       decoy titles that every filter rule rejects
* page.sql             the same taxonomy rendered as MediaWiki dump
* categorylinks.sql    files, plus noise that parsers must skip
                       without changing the edge set
* vectors.tsv          8-dim pseudo-embeddings for every title that
                       passes the default filters
* zh_edges.tsv         Chinese-script taxonomy with Latin-token and
                       translated-keyword decoys
* lang_zh.json         filter overrides for the Chinese fixture
* run_config.json      CLI config-file example used by tests

Run from the repository root:  python3 tools/gen_fixtures.py
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

from taxopairs import FilterConfig, RawEdge, Table, passes_filter, synthesize_dumps
from taxopairs.dump_ingest import render_insert_statement

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# (adjective, nation-category) pairs chosen so the nation title is never
# a substring of "<adjective> <topic>" (those direct pairs must survive
# the substring filter)
NATIONS = [
    ("French", "France"),
    ("German", "Germany"),
    ("Italian", "Italy"),
    ("Spanish", "Spain"),
    ("Polish", "Poland"),
    ("Turkish", "Turkey"),
    ("Greek", "Greece"),
    ("Swedish", "Sweden"),
    ("Danish", "Denmark"),
    ("Norwegian", "Norway"),
    ("Finnish", "Finland"),
    ("Dutch", "Netherlands"),
    ("Portuguese", "Portugal"),
    ("Belgian", "Belgium"),
    ("Irish", "Ireland"),
    ("Hungarian", "Hungary"),
    ("Czech", "Czech Republic"),
    ("Welsh", "Wales"),
    ("Scottish", "Scotland"),
    ("Basque", "Basque Country"),
]

TOPICS = {
    "music": "Music",
    "painters": "Painters",
    "cuisine": "Cuisine",
    "folklore": "Folklore",
    "architecture": "Architecture",
    "poetry": "Poetry",
    "sculpture": "Sculpture",
    "cinema": "Cinema",
}


def main_edges() -> list[tuple[str, str]]:
    edges: list[tuple[str, str]] = []

    # "New Year's Eve" neighborhood: two distinct ancestor paths, one
    # reaching Entertainment, one generalizing to Days
    edges += [
        ("New Year's Eve", "Holidays"),
        ("New Year's Eve", "Winter events"),
        ("Holidays", "Days"),  # substring pair: edge only, never emitted
        ("Holidays", "Celebrations"),
        ("Celebrations", "Entertainment"),
        ("Winter events", "Events"),  # substring pair as well
        ("Days", "Calendars"),
    ]

    # anchor pairs exercised by tests (all survive the default filters)
    edges += [
        ("Bone fractures", "Injuries"),
        ("Chemical accident", "Pollution"),
        ("Chemical accident", "Pollution"),  # duplicate row on purpose
        ("Cantonese music", "Cantonese culture"),
        ("Early Turkish Anatolia", "Medieval Anatolia"),
        ("Learned societies", "Academic organizations"),
        ("Pakistan", "South Asian countries"),
        ("Armenian sportspeople", "Sportspeople"),
        ("Curaçao male actors", "Male actors"),
        ("Argentine design", "Design"),
        ("Nigerian inventions", "Inventions"),
        ("Injuries", "Medicine"),
        ("Pollution", "Environmental issues"),
        ("Cantonese culture", "Chinese culture"),
        ("Medieval Anatolia", "Historical regions"),
        ("Academic organizations", "Organizations"),  # substring: edge only
        ("South Asian countries", "Countries"),  # substring: edge only
        ("Sportspeople", "People"),  # substring: edge only
        ("Male actors", "Actors"),  # substring: edge only
        ("Design", "Arts"),
        ("Inventions", "Technology"),
    ]

    # nation/topic families: bulk of the direct pairs and all sibling
    # structure (children share a nation parent and a topic parent)
    for adjective, nation in NATIONS:
        for word, topic_node in TOPICS.items():
            child = f"{adjective} {word}"
            edges.append((child, nation))  # survives the substring filter
            edges.append((child, topic_node))  # substring-rejected pair, edge only
        edges.append((nation, "European countries"))
    edges += [
        ("Music", "Arts"),
        ("Painters", "Artists"),
        ("Cuisine", "Food culture"),
        ("Folklore", "Culture"),
        ("Architecture", "Arts"),
        ("Poetry", "Literature"),
        ("Sculpture", "Arts"),
        ("Cinema", "Entertainment"),
        ("European countries", "Countries"),
        ("Artists", "People"),
        ("Literature", "Arts"),
        ("Food culture", "Culture"),
        ("Chinese culture", "Culture"),
        ("Historical regions", "Geography"),
    ]

    # a genuine 2-cycle (category loops exist in real dumps)
    edges += [
        ("Self-reference", "Circular definitions"),
        ("Circular definitions", "Self-reference"),
    ]
    # self-loop: dropped at graph build with a warning
    edges.append(("Recursion", "Recursion"))

    # decoys: present in the graph, rejected by exactly one filter rule
    edges += [
        ("Lists of lakes", "Geography"),  # keyword: lists, of
        ("History of France", "France"),  # keyword: of
        ("Days of the year", "Calendars"),  # keyword: of
        ("2004 albums", "Albums"),  # digit
        ("Songs written by committee", "Songs"),  # keyword: by
        ("U.S. states", "Geography"),  # forbidden char .
        ("What? Really!", "Questions"),  # forbidden chars ? !
        ("Wikipedia stubs", "Wikipedia"),  # keyword: stubs
        (
            "Extraordinarily comprehensive compendium of reference material",
            "Reference works",
        ),  # 61 chars: length rule fires first
        ("Albums", "Music"),
        ("Songs", "Music"),
        ("Questions", "Language"),
        ("Wikipedia", "Websites"),
        ("Reference works", "Literature"),
    ]
    return edges


ZH_EDGES = [
    ("京剧", "中国戏曲"),
    ("昆曲", "中国戏曲"),
    ("粤剧", "中国戏曲"),
    ("黄梅戏", "中国戏曲"),
    ("中国戏曲", "传统艺术"),
    ("川菜", "中华美食"),
    ("粤菜", "中华美食"),
    ("鲁菜", "中华美食"),
    ("湘菜", "中华美食"),
    ("中华美食", "饮食文化"),
    ("唐诗", "古典文学"),
    ("宋词", "古典文学"),
    ("元曲", "古典文学"),
    ("古典文学", "中华文明"),
    ("书法", "传统艺术"),
    ("国画", "传统艺术"),
    ("传统艺术", "中华文明"),
    ("武术", "传统体育"),
    ("太极拳", "武术"),
    ("咏春拳", "武术"),
    ("围棋", "棋类游戏"),
    ("象棋", "棋类游戏"),
    ("跳棋", "棋类游戏"),
    ("棋类游戏", "休闲娱乐"),
    ("茶道", "饮食文化"),
    ("饮食文化", "中华文明"),
    ("剪纸", "民间工艺"),
    ("刺绣", "民间工艺"),
    ("泥塑", "民间工艺"),
    ("民间工艺", "传统艺术"),
    ("舞龙", "民俗活动"),
    ("舞狮", "民俗活动"),
    ("庙会", "民俗活动"),
    ("民俗活动", "中华文明"),
    ("二胡", "民族乐器"),
    ("琵琶", "民族乐器"),
    ("古筝", "民族乐器"),
    ("民族乐器", "传统艺术"),
    ("传统体育", "体育运动"),
    ("休闲娱乐", "大众文化"),
    # decoys for the Chinese filter config
    ("Rock 音乐", "大众文化"),  # Latin-script token
    ("Jazz", "大众文化"),  # pure Latin title
    ("动画 列表", "大众文化"),  # translated keyword
    ("体育 小作品", "体育运动"),  # translated keyword
    ("消歧义", "维基百科"),  # keyword as the whole title
    ("2008年奥运", "体育运动"),  # digits rejected in any script
    ("维基百科", "大众文化"),
]


def pseudo_vector(title: str, dim: int = 8) -> list[float]:
    """Title -> stable pseudo-embedding in [-1, 1), 6 decimals."""
    out = []
    for k in range(dim):
        digest = hashlib.sha256(f"{title}#{k}".encode("utf-8")).digest()
        (raw,) = struct.unpack("<Q", digest[:8])
        out.append(round(raw / 2**63 - 1.0, 6))
    return out


def dump_noise() -> tuple[bytes, bytes]:
    """Extra dump lines that exercise skip paths without altering the
    category edge set. Returns (page noise, categorylinks noise)."""
    article_rows = [
        b"(9001,0,'Paris',0,0,0.5,'20240101000000',NULL,1,100,'wikitext',NULL)",
        b"(9002,0,'Rock_band_discography',0,0,0.5,'20240101000000',NULL,1,100,'wikitext',NULL)",
    ]
    page_noise = b"".join(
        [
            b"-- MySQL dump 10.19\n",
            b"/*!40101 SET @saved_cs_client = @@character_set_client */;\n",
            b"\n",
            render_insert_statement(Table.PAGE, article_rows),
            # too few fields
            b"INSERT INTO `page` VALUES (9100,0);\n",
            # non-integer id
            b"INSERT INTO `page` VALUES ('abc',0,'Broken',0,0,0.5,'20240101000000',NULL,1,100,'wikitext',NULL);\n",
            # invalid UTF-8 title bytes
            b"INSERT INTO `page` VALUES (9101,0,'\xff\xfe',0,0,0.5,'20240101000000',NULL,1,100,'wikitext',NULL);\n",
            # some other table entirely
            b"INSERT INTO `pagelinks` VALUES (1,0,'X',0);\n",
        ]
    )
    links_noise = b"".join(
        [
            b"-- MySQL dump 10.19\n",
            # article-to-category memberships: skipped (not subcat)
            b"INSERT INTO `categorylinks` VALUES (9001,'France','','2024-01-01 00:00:00','','uca-default-u-kn','page');\n",
            b"INSERT INTO `categorylinks` VALUES (9002,'Music','','2024-01-01 00:00:00','','uca-default-u-kn','file');\n",
            # unknown link type
            b"INSERT INTO `categorylinks` VALUES (9001,'France','','2024-01-01 00:00:00','','uca-default-u-kn','weird');\n",
            # subcat from a page id with no namespace-14 record
            b"INSERT INTO `categorylinks` VALUES (999999,'France','','2024-01-01 00:00:00','','uca-default-u-kn','subcat');\n",
        ]
    )
    return page_noise, links_noise


def write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    print(f"wrote {path} ({len(data)} bytes)")


def main() -> None:
    edges = main_edges()
    tsv = "".join(f"{c}\t{p}\n" for c, p in edges)
    write(FIXTURES / "edges.tsv", tsv.encode("utf-8"))

    raw = [RawEdge(c, p) for c, p in edges]
    page_sql, links_sql = synthesize_dumps(raw, tuples_per_statement=40)
    page_noise, links_noise = dump_noise()
    # noise interleaved before and after the real statements
    write(FIXTURES / "page.sql", page_noise + page_sql)
    write(FIXTURES / "categorylinks.sql", links_sql + links_noise)

    titles = sorted({t for c, p in edges for t in (c, p)})
    passing = [t for t in titles if passes_filter(t, FilterConfig())]
    vec_lines = []
    for t in passing:
        vec = " ".join(f"{x:.6f}" for x in pseudo_vector(t))
        vec_lines.append(f"{t}\t{vec}\n")
    write(FIXTURES / "vectors.tsv", "".join(vec_lines).encode("utf-8"))
    print(f"vectors for {len(passing)} of {len(titles)} titles")

    zh_tsv = "".join(f"{c}\t{p}\n" for c, p in ZH_EDGES)
    write(FIXTURES / "zh_edges.tsv", zh_tsv.encode("utf-8"))
    lang_zh = {
        "keyword_blacklist": ["列表", "小作品", "消歧义"],
        "script_filter": "reject_latin_tokens",
    }
    write(
        FIXTURES / "lang_zh.json",
        (json.dumps(lang_zh, ensure_ascii=False, indent=2) + "\n").encode("utf-8"),
    )

    run_config = {
        "scheme": "threeway",
        "seed": 42,
        "train_size": 120,
        "dev_size": 30,
        "oversample": 5.0,
        "scorer": "lexical:3",
    }
    write(
        FIXTURES / "run_config.json",
        (json.dumps(run_config, indent=2) + "\n").encode("utf-8"),
    )


if __name__ == "__main__":
    main()
