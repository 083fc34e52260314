"""synthpara command-line interface.

One subcommand per operation: gen identity|case-map|pb-trees|phrase-cat,
obfuscate, align, extract-phrases, pipeline-phrase-cat, toxicity, overlap,
summary, filter. Global flags --seed/--shards/--config/--json-logs are
accepted by every subcommand.

Exit codes: 0 success, 1 runtime error (I/O, bad data), 2 usage error.
Values may also come from an INI config file (sections [global] and
[<subcommand>], keys named like the flags with underscores); precedence is
CLI flag > config file > built-in default.

The synthetic generators honor --shards by splitting the pair index range
into contiguous blocks processed by worker processes and concatenated in
block order. Randomness is keyed per pair index, so any shard count yields
byte-identical output; phrase-cat generation runs in one process (its
output is shard-invariant for the same reason).
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import shutil
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .alignment import (
    read_pharaoh,
    symmetrize,
    train_ibm1,
    viterbi_align,
    write_pharaoh,
    write_table,
)
from .corpus import (
    LengthDistribution,
    ParallelCorpus,
    SentencePair,
    filter_corpus,
    read_parallel,
    write_parallel,
)
from .obfuscation import (
    ObfuscationConfig,
    build_obfuscation_map,
    obfuscate_corpus,
    read_obfuscation_map,
    write_obfuscation_map,
)
from .phrases import (
    PhraseCatConfig,
    extract_phrases,
    phrase_cat_pairs,
    read_phrase_table,
    write_phrase_table,
)
from .rng import RandomSource
from .stats import corpus_summary, vocab_overlap
from .synth_tasks import (
    CaseMapConfig,
    PbTreesConfig,
    SyntheticVocabulary,
    iter_case_map_blocks,
    iter_identity_blocks,
    iter_pb_trees_blocks,
)
from .toxicity import hallucinated_toxicity, load_toxicity_list


class StageLogger:
    def __init__(self, enabled: bool):
        self.enabled = enabled

    def done(self, stage: str, started: float, outputs, records: int) -> None:
        if not self.enabled:
            return
        print(json.dumps({
            "stage": stage,
            "wall_time_s": round(time.monotonic() - started, 6),
            "outputs": [str(p) for p in outputs],
            "records": records,
        }), flush=True)


# ---------------------------------------------------------------------------
# Sharded synthetic generation

def _gen_params(args, kind: str) -> dict:
    return {
        "kind": kind,
        "seed": args.seed,
        "vocab_size": args.vocab_size,
        "token_len": args.token_len,
        "len_mean": args.len_mean,
        "len_stddev": args.len_stddev,
        "len_min": args.len_min,
        "len_max": args.len_max,
        "ds": getattr(args, "ds", 0.0),
        "dt": getattr(args, "dt", 0.0),
        "r": getattr(args, "r", 0.0),
        "want_deriv": getattr(args, "derivations", None) is not None,
    }


def _write_gen_range(params: dict, start: int, stop: int, src_path, trg_path,
                     deriv_path) -> None:
    """Generate pairs [start, stop) of the configured corpus into files."""
    vocab = SyntheticVocabulary(params["vocab_size"], params["token_len"])
    dist = LengthDistribution(params["len_mean"], params["len_stddev"],
                              params["len_min"], params["len_max"])
    rng = RandomSource(params["seed"])
    n = stop - start
    kind = params["kind"]
    with open(src_path, "wb") as fs, open(trg_path, "wb") as ft:
        if kind == "identity":
            for block in iter_identity_blocks(vocab, n, dist, rng,
                                              first_index=start):
                fs.write(block)
                ft.write(block)
        elif kind == "case-map":
            config = CaseMapConfig(params["ds"], params["dt"], dist, rng)
            for src_b, trg_b, _, _ in iter_case_map_blocks(
                vocab, n, config, first_index=start
            ):
                fs.write(src_b)
                ft.write(trg_b)
        elif kind == "pb-trees":
            config = PbTreesConfig(params["r"], dist, rng,
                                   emit_derivations=params["want_deriv"])
            fd = open(deriv_path, "wb") if deriv_path else None
            try:
                for src_b, trg_b, der_b in iter_pb_trees_blocks(
                    vocab, n, config, first_index=start
                ):
                    fs.write(src_b)
                    ft.write(trg_b)
                    if fd is not None:
                        fd.write(der_b)
            finally:
                if fd is not None:
                    fd.close()
        else:
            raise ValueError(f"unknown generator {kind!r}")


def _concatenate(shard_paths, final_path) -> None:
    with open(final_path, "wb") as out:
        for shard in shard_paths:
            with open(shard, "rb") as fh:
                shutil.copyfileobj(fh, out)
            os.remove(shard)


def _run_generation(args, kind: str) -> None:
    log = StageLogger(args.json_logs)
    started = time.monotonic()
    params = _gen_params(args, kind)
    deriv_path = getattr(args, "derivations", None)
    outputs = [args.out_src, args.out_trg] + ([deriv_path] if deriv_path else [])
    shards = args.shards
    if shards == 1:
        _write_gen_range(params, 0, args.pairs, args.out_src, args.out_trg,
                         deriv_path)
    else:
        ranges = [
            (k * args.pairs // shards, (k + 1) * args.pairs // shards)
            for k in range(shards)
        ]
        jobs = []
        for k, (lo, hi) in enumerate(ranges):
            jobs.append((
                lo, hi,
                f"{args.out_src}.shard{k:04d}",
                f"{args.out_trg}.shard{k:04d}",
                f"{deriv_path}.shard{k:04d}" if deriv_path else None,
            ))
        # worker count is capped; block outputs are identical regardless
        workers = min(shards, 64, max(4, 4 * (os.cpu_count() or 1)))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_write_gen_range, params, lo, hi, sp, tp, dp)
                for lo, hi, sp, tp, dp in jobs
            ]
            for future in futures:
                future.result()
        _concatenate([j[2] for j in jobs], args.out_src)
        _concatenate([j[3] for j in jobs], args.out_trg)
        if deriv_path:
            _concatenate([j[4] for j in jobs], deriv_path)
    log.done(f"gen-{kind}", started, outputs, args.pairs)


def cmd_gen_identity(args) -> None:
    _run_generation(args, "identity")


def cmd_gen_case_map(args) -> None:
    _run_generation(args, "case-map")


def cmd_gen_pb_trees(args) -> None:
    _run_generation(args, "pb-trees")


def cmd_gen_phrase_cat(args) -> None:
    log = StageLogger(args.json_logs)
    started = time.monotonic()
    table = read_phrase_table(args.table)
    dist = LengthDistribution(args.pcount_mean, args.pcount_stddev,
                              args.pcount_min, args.pcount_max)
    config = PhraseCatConfig(dist, args.weighting, RandomSource(args.seed))
    with open(args.out_src, "w", encoding="utf-8", newline="\n") as fs, \
            open(args.out_trg, "w", encoding="utf-8", newline="\n") as ft:
        for pair, _ in phrase_cat_pairs(table, args.pairs, config):
            fs.write(" ".join(pair.source))
            fs.write("\n")
            ft.write(" ".join(pair.target))
            ft.write("\n")
    log.done("gen-phrase-cat", started, [args.out_src, args.out_trg], args.pairs)


# ---------------------------------------------------------------------------
# Corpus-derived subcommands

def cmd_obfuscate(args) -> None:
    log = StageLogger(args.json_logs)
    started = time.monotonic()
    corpus = read_parallel(args.src, args.trg)
    if args.map_in_src or args.map_in_trg:
        if not (args.map_in_src and args.map_in_trg):
            raise ValueError("--map-in-src and --map-in-trg must be given together")
        omap = read_obfuscation_map(args.map_in_src, args.map_in_trg)
    else:
        omap = build_obfuscation_map(
            corpus, args.token_len, RandomSource(args.seed, stream_id=0)
        )
    config = ObfuscationConfig(args.ratio, RandomSource(args.seed, stream_id=1))
    obfuscated = obfuscate_corpus(corpus, omap, config)
    write_parallel(obfuscated, args.out_src, args.out_trg)
    outputs = [args.out_src, args.out_trg]
    if args.map_out_src or args.map_out_trg:
        if not (args.map_out_src and args.map_out_trg):
            raise ValueError("--map-out-src and --map-out-trg must be given together")
        write_obfuscation_map(omap, args.map_out_src, args.map_out_trg)
        outputs += [args.map_out_src, args.map_out_trg]
    log.done("obfuscate", started, outputs, len(obfuscated))


def cmd_align(args) -> None:
    log = StageLogger(args.json_logs)
    started = time.monotonic()
    corpus = read_parallel(args.src, args.trg)
    fwd_table = train_ibm1(corpus, args.iterations)
    swapped = ParallelCorpus(
        [SentencePair(p.target, p.source) for p in corpus.pairs]
    )
    rev_table = train_ibm1(swapped, args.iterations)
    alignments = []
    for pair in corpus.pairs:
        fwd = viterbi_align(pair, fwd_table, "forward")
        rev = viterbi_align(pair, rev_table, "reverse")
        alignments.append(symmetrize(fwd, rev, args.heuristic))
    write_pharaoh(alignments, args.out)
    outputs = [args.out]
    if args.save_tables:
        fwd_path = f"{args.save_tables}.fwd.tsv"
        rev_path = f"{args.save_tables}.rev.tsv"
        write_table(fwd_table, fwd_path)
        write_table(rev_table, rev_path)
        outputs += [fwd_path, rev_path]
    log.done("align", started, outputs, len(corpus))


def cmd_extract_phrases(args) -> None:
    log = StageLogger(args.json_logs)
    started = time.monotonic()
    corpus = read_parallel(args.src, args.trg)
    alignments = read_pharaoh(args.alignments)
    table = extract_phrases(corpus, alignments, args.max_len,
                            args.extend_unaligned)
    write_phrase_table(table, args.out)
    log.done("extract-phrases", started, [args.out], len(table.entries))


def cmd_pipeline_phrase_cat(args) -> None:
    log = StageLogger(args.json_logs)
    os.makedirs(args.workdir, exist_ok=True)
    alignments_path = os.path.join(args.workdir, "alignments.pharaoh")
    table_path = os.path.join(args.workdir, "phrase-table.tsv")
    fwd_path = os.path.join(args.workdir, "table-fwd.tsv")
    rev_path = os.path.join(args.workdir, "table-rev.tsv")

    def stage(name, fn):
        started = time.monotonic()
        try:
            result, outputs, records = fn()
        except (ValueError, OSError) as exc:
            raise ValueError(f"{name}: {exc}") from exc
        log.done(name, started, outputs, records)
        return result

    corpus = stage("read", lambda: (
        read_parallel(args.train_src, args.train_trg), [],
        0,
    ))

    def do_align():
        fwd_table = train_ibm1(corpus, args.iterations)
        swapped = ParallelCorpus(
            [SentencePair(p.target, p.source) for p in corpus.pairs]
        )
        rev_table = train_ibm1(swapped, args.iterations)
        alignments = []
        for pair in corpus.pairs:
            fwd = viterbi_align(pair, fwd_table, "forward")
            rev = viterbi_align(pair, rev_table, "reverse")
            alignments.append(symmetrize(fwd, rev, args.heuristic))
        write_pharaoh(alignments, alignments_path)
        write_table(fwd_table, fwd_path)
        write_table(rev_table, rev_path)
        return alignments, [alignments_path, fwd_path, rev_path], len(corpus)

    alignments = stage("align", do_align)

    def do_extract():
        table = extract_phrases(corpus, alignments, args.max_len,
                                args.extend_unaligned)
        write_phrase_table(table, table_path)
        return table, [table_path], len(table.entries)

    table = stage("extract-phrases", do_extract)

    def do_generate():
        dist = LengthDistribution(args.pcount_mean, args.pcount_stddev,
                                  args.pcount_min, args.pcount_max)
        config = PhraseCatConfig(dist, args.weighting, RandomSource(args.seed))
        with open(args.out_src, "w", encoding="utf-8", newline="\n") as fs, \
                open(args.out_trg, "w", encoding="utf-8", newline="\n") as ft:
            for pair, _ in phrase_cat_pairs(table, args.pairs, config):
                fs.write(" ".join(pair.source))
                fs.write("\n")
                ft.write(" ".join(pair.target))
                ft.write("\n")
        return None, [args.out_src, args.out_trg], args.pairs

    stage("generate", do_generate)


def _read_token_lines(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return [tuple(line.split()) for line in fh.read().splitlines()]


def _emit_report(report_dict: dict, out_path) -> None:
    text = json.dumps(report_dict, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        print(text)


def cmd_toxicity(args) -> None:
    log = StageLogger(args.json_logs)
    started = time.monotonic()
    sources = _read_token_lines(args.src)
    translations = _read_token_lines(args.hyp)
    src_list = load_toxicity_list(args.src_list)
    trg_list = load_toxicity_list(args.trg_list)
    mode = "substring" if args.substring else "token"
    report = hallucinated_toxicity(sources, translations, src_list, trg_list,
                                   mode)
    _emit_report(report.to_dict(), args.out)
    log.done("toxicity", started, [args.out] if args.out else [],
             report.total_sentences)


def cmd_overlap(args) -> None:
    log = StageLogger(args.json_logs)
    started = time.monotonic()
    report = vocab_overlap(args.pt, args.ft, args.label)
    _emit_report(report.to_dict(), args.out)
    log.done("overlap", started, [args.out] if args.out else [], 1)


def cmd_summary(args) -> None:
    log = StageLogger(args.json_logs)
    started = time.monotonic()
    corpus = read_parallel(args.src, args.trg)
    summary = corpus_summary(corpus)
    _emit_report(summary.to_dict(), args.out)
    log.done("summary", started, [args.out] if args.out else [], len(corpus))


def cmd_filter(args) -> None:
    log = StageLogger(args.json_logs)
    started = time.monotonic()
    corpus = read_parallel(args.src, args.trg)
    kept = filter_corpus(corpus, args.max_ratio, dedup=not args.no_dedup)
    write_parallel(kept, args.out_src, args.out_trg)
    print(f"kept {len(kept)} of {len(corpus)} pairs", file=sys.stderr)
    log.done("filter", started, [args.out_src, args.out_trg], len(kept))


# ---------------------------------------------------------------------------
# Parser construction, config merge, validation

def _add_global_flags(sub) -> None:
    sub.add_argument("--seed", type=int, default=0,
                     help="base random seed (default 0)")
    sub.add_argument("--shards", type=int, default=1,
                     help="worker shards for generation (default 1)")
    sub.add_argument("--config", default=None,
                     help="INI config file; CLI flags override its values")
    sub.add_argument("--json-logs", action="store_true", default=False,
                     help="print one JSON object per completed stage")


def _add_length_flags(sub, prefix: str, mean: float, stddev: float,
                      lo: int, hi: int) -> None:
    sub.add_argument(f"--{prefix}-mean", type=float, default=mean)
    sub.add_argument(f"--{prefix}-stddev", type=float, default=stddev)
    sub.add_argument(f"--{prefix}-min", type=int, default=lo)
    sub.add_argument(f"--{prefix}-max", type=int, default=hi)


def _add_synth_gen_flags(sub) -> None:
    sub.add_argument("--pairs", type=int, required=False)
    sub.add_argument("--out-src", required=False)
    sub.add_argument("--out-trg", required=False)
    sub.add_argument("--vocab-size", type=int, default=26 ** 3)
    sub.add_argument("--token-len", type=int, default=3)
    _add_length_flags(sub, "len", 9.0, 3.0, 1, 64)
    _add_global_flags(sub)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="synthpara",
        description="Deterministic synthetic parallel corpus generators and "
                    "audit tools.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    submap = {}

    def register(key, sub, handler):
        sub.set_defaults(handler=handler, command_key=key)
        submap[key] = sub

    gen = subparsers.add_parser("gen", help="generate a synthetic corpus")
    gen_sub = gen.add_subparsers(dest="generator", required=True)

    sub = gen_sub.add_parser("identity", help="uniform sentences copied verbatim")
    _add_synth_gen_flags(sub)
    register("gen identity", sub, cmd_gen_identity)

    sub = gen_sub.add_parser("case-map",
                             help="lowercase/uppercase pairs with deletions")
    _add_synth_gen_flags(sub)
    sub.add_argument("--ds", type=float, default=0.0,
                     help="source-side deletion probability")
    sub.add_argument("--dt", type=float, default=0.0,
                     help="target-side deletion probability")
    register("gen case-map", sub, cmd_gen_case_map)

    sub = gen_sub.add_parser("pb-trees",
                             help="random bracketing with subtree swaps")
    _add_synth_gen_flags(sub)
    sub.add_argument("--r", type=float, default=0.15,
                     help="subtree swap probability")
    sub.add_argument("--derivations", default=None,
                     help="also write derivation s-expressions to this path")
    register("gen pb-trees", sub, cmd_gen_pb_trees)

    sub = gen_sub.add_parser("phrase-cat",
                             help="concatenate sampled phrase-table entries")
    sub.add_argument("--table", required=False,
                     help="phrase table TSV (from extract-phrases)")
    sub.add_argument("--pairs", type=int, required=False)
    sub.add_argument("--out-src", required=False)
    sub.add_argument("--out-trg", required=False)
    sub.add_argument("--weighting", choices=("uniform", "frequency"),
                     default="uniform")
    _add_length_flags(sub, "pcount", 4.0, 1.5, 1, 20)
    _add_global_flags(sub)
    register("gen phrase-cat", sub, cmd_gen_phrase_cat)

    sub = subparsers.add_parser("obfuscate",
                                help="replace words with nonsense tokens")
    sub.add_argument("--src", required=False)
    sub.add_argument("--trg", required=False)
    sub.add_argument("--out-src", required=False)
    sub.add_argument("--out-trg", required=False)
    sub.add_argument("--ratio", type=float, default=None,
                     help="per-occurrence replacement probability in [0, 1]")
    sub.add_argument("--token-len", type=int, default=5)
    sub.add_argument("--map-out-src", default=None)
    sub.add_argument("--map-out-trg", default=None)
    sub.add_argument("--map-in-src", default=None)
    sub.add_argument("--map-in-trg", default=None)
    _add_global_flags(sub)
    register("obfuscate", sub, cmd_obfuscate)

    sub = subparsers.add_parser("align",
                                help="train IBM Model 1 and write alignments")
    sub.add_argument("--src", required=False)
    sub.add_argument("--trg", required=False)
    sub.add_argument("--out", required=False, help="Pharaoh alignment output")
    sub.add_argument("--iterations", type=int, default=10)
    sub.add_argument("--heuristic",
                     choices=("intersection", "union", "grow-diag-final-and"),
                     default="grow-diag-final-and")
    sub.add_argument("--save-tables", default=None,
                     help="also write lexical tables to PREFIX.{fwd,rev}.tsv")
    _add_global_flags(sub)
    register("align", sub, cmd_align)

    sub = subparsers.add_parser("extract-phrases",
                                help="extract consistent phrase pairs")
    sub.add_argument("--src", required=False)
    sub.add_argument("--trg", required=False)
    sub.add_argument("--alignments", required=False, help="Pharaoh alignment file")
    sub.add_argument("--out", required=False, help="phrase table TSV output")
    sub.add_argument("--max-len", type=int, default=7)
    sub.add_argument("--no-extend-unaligned", dest="extend_unaligned",
                     action="store_false", default=True)
    _add_global_flags(sub)
    register("extract-phrases", sub, cmd_extract_phrases)

    sub = subparsers.add_parser(
        "pipeline-phrase-cat",
        help="align, extract phrases, and generate in one run",
    )
    sub.add_argument("--train-src", required=False)
    sub.add_argument("--train-trg", required=False)
    sub.add_argument("--pairs", type=int, required=False)
    sub.add_argument("--out-src", required=False)
    sub.add_argument("--out-trg", required=False)
    sub.add_argument("--workdir", required=False,
                     help="directory for intermediate artifacts")
    sub.add_argument("--iterations", type=int, default=10)
    sub.add_argument("--heuristic",
                     choices=("intersection", "union", "grow-diag-final-and"),
                     default="grow-diag-final-and")
    sub.add_argument("--max-len", type=int, default=7)
    sub.add_argument("--no-extend-unaligned", dest="extend_unaligned",
                     action="store_false", default=True)
    sub.add_argument("--weighting", choices=("uniform", "frequency"),
                     default="uniform")
    _add_length_flags(sub, "pcount", 4.0, 1.5, 1, 20)
    _add_global_flags(sub)
    register("pipeline-phrase-cat", sub, cmd_pipeline_phrase_cat)

    sub = subparsers.add_parser("toxicity",
                                help="hallucinated-toxicity rate report")
    sub.add_argument("--src", required=False)
    sub.add_argument("--hyp", required=False, help="translations of --src")
    sub.add_argument("--src-list", required=False)
    sub.add_argument("--trg-list", required=False)
    sub.add_argument("--substring", action="store_true", default=False,
                     help="substring matching for unsegmented scripts")
    sub.add_argument("--out", default=None, help="write JSON report here")
    _add_global_flags(sub)
    register("toxicity", sub, cmd_toxicity)

    sub = subparsers.add_parser("overlap", help="vocabulary overlap report")
    sub.add_argument("--pt", required=False, help="pre-training side file")
    sub.add_argument("--ft", required=False, help="fine-tuning side file")
    sub.add_argument("--label", default="")
    sub.add_argument("--out", default=None)
    _add_global_flags(sub)
    register("overlap", sub, cmd_overlap)

    sub = subparsers.add_parser("summary", help="corpus summary report")
    sub.add_argument("--src", required=False)
    sub.add_argument("--trg", required=False)
    sub.add_argument("--out", default=None)
    _add_global_flags(sub)
    register("summary", sub, cmd_summary)

    sub = subparsers.add_parser("filter",
                                help="deduplicate and drop extreme ratios")
    sub.add_argument("--src", required=False)
    sub.add_argument("--trg", required=False)
    sub.add_argument("--out-src", required=False)
    sub.add_argument("--out-trg", required=False)
    sub.add_argument("--max-ratio", type=float, default=math.inf,
                     help="drop pairs with length ratio above this (>= 1)")
    sub.add_argument("--no-dedup", action="store_true", default=False)
    _add_global_flags(sub)
    register("filter", sub, cmd_filter)

    return parser, submap


REQUIRED_FLAGS = {
    "gen identity": ("pairs", "out_src", "out_trg"),
    "gen case-map": ("pairs", "out_src", "out_trg"),
    "gen pb-trees": ("pairs", "out_src", "out_trg"),
    "gen phrase-cat": ("table", "pairs", "out_src", "out_trg"),
    "obfuscate": ("src", "trg", "out_src", "out_trg", "ratio"),
    "align": ("src", "trg", "out"),
    "extract-phrases": ("src", "trg", "alignments", "out"),
    "pipeline-phrase-cat": ("train_src", "train_trg", "pairs", "out_src",
                            "out_trg", "workdir"),
    "toxicity": ("src", "hyp", "src_list", "trg_list"),
    "overlap": ("pt", "ft"),
    "summary": ("src", "trg"),
    "filter": ("src", "trg", "out_src", "out_trg"),
}


def _validate(args) -> list:
    problems = []

    def check(name, condition, requirement):
        value = getattr(args, name, None)
        if value is not None and not condition(value):
            flag = "--" + name.replace("_", "-")
            problems.append(f"{flag} {value} is invalid: must be {requirement}")

    for name in REQUIRED_FLAGS.get(args.command_key, ()):
        if getattr(args, name, None) is None:
            problems.append(f"--{name.replace('_', '-')} is required")

    check("seed", lambda v: v >= 0, "a non-negative integer")
    check("shards", lambda v: v >= 1, "an integer >= 1")
    check("pairs", lambda v: v >= 1, "an integer >= 1")
    for prob_flag in ("r", "ratio"):
        check(prob_flag, lambda v: 0.0 <= v <= 1.0, "in the range [0, 1]")
    for prob_flag in ("ds", "dt"):
        # deletion probability 1 would leave a side empty on every attempt
        check(prob_flag, lambda v: 0.0 <= v < 1.0, "in the range [0, 1)")
    check("token_len", lambda v: v >= 1, "an integer >= 1")
    if getattr(args, "vocab_size", None) is not None:
        capacity = 26 ** getattr(args, "token_len", 3)
        check("vocab_size", lambda v: 1 <= v <= capacity,
              f"in the range [1, 26^token_len = {capacity}]")
    for prefix in ("len", "pcount"):
        check(f"{prefix}_mean", lambda v: v > 0, "> 0")
        check(f"{prefix}_stddev", lambda v: v >= 0, ">= 0")
        check(f"{prefix}_min", lambda v: v >= 1, "an integer >= 1")
        hi = getattr(args, f"{prefix}_max", None)
        lo = getattr(args, f"{prefix}_min", None)
        if hi is not None and lo is not None and hi < lo:
            problems.append(
                f"--{prefix}-max {hi} is invalid: must be >= --{prefix}-min {lo}"
            )
    check("iterations", lambda v: v >= 1, "an integer >= 1")
    check("max_len", lambda v: v >= 1, "an integer >= 1")
    check("max_ratio", lambda v: v >= 1, ">= 1")
    return problems


def _coerce_config_value(action, raw: str):
    if isinstance(action.const, bool):  # store_true/store_false flag
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if action.type is not None:
        return action.type(raw)
    return raw


def _apply_config(parser, sub, command_key: str, path) -> None:
    reader = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            reader.read_file(fh)
    except (OSError, configparser.Error) as exc:
        parser.error(f"cannot read config {path}: {exc}")
    actions = {
        action.dest: action
        for action in sub._actions
        if action.dest != argparse.SUPPRESS
    }
    overrides = {}
    for section in ("global", command_key):
        if not reader.has_section(section):
            continue
        for key, raw in reader.items(section):
            dest = key.replace("-", "_")
            if dest not in actions:
                parser.error(
                    f"config {path}: unknown key {key!r} in [{section}]"
                )
            try:
                overrides[dest] = _coerce_config_value(actions[dest], raw)
            except (TypeError, ValueError):
                parser.error(
                    f"config {path}: bad value {raw!r} for key {key!r}"
                )
    sub.set_defaults(**overrides)


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser, submap = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        _apply_config(parser, submap[args.command_key], args.command_key,
                      args.config)
        args = parser.parse_args(argv)  # explicit flags still win
    problems = _validate(args)
    if problems:
        parser.error("; ".join(problems))
    try:
        args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"synthpara: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
