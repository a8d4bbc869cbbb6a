// Command-line front end: build index images, run query sets, benchmark,
// and report per-section space.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uidx/corpus.hpp"
#include "uidx/postings.hpp"
#include "uidx/query.hpp"

namespace {

using namespace uidx;

struct CommonOpts {
  std::string mode = "nonpos";
  std::string repr = "vbyte";
  uint32_t k = 4;
  uint32_t B = 16;
  std::string rice_b = "auto";
  uint32_t ds = 32;
  std::string stopwords_path;
};

ParsingMode parse_mode(const std::string& m) {
  if (m == "nonpos") return ParsingMode::kNonPositional;
  if (m == "pos") return ParsingMode::kPositional;
  throw Error("unknown mode '" + m + "' (valid: nonpos, pos)");
}

BuildParams make_params(const CommonOpts& o) {
  BuildParams p;
  p.k = o.k;
  p.B = o.B;
  p.ds = o.ds;
  if (o.rice_b == "auto") {
    p.rice_b = -1;
  } else {
    p.rice_b = std::stoi(o.rice_b);
    if (p.rice_b < 0 || p.rice_b > 30) throw Error("--rice-b must be auto or 0..30");
  }
  return p;
}

IndexImage build_image(const std::string& corpus_path, const CommonOpts& o) {
  IngestConfig cfg;
  cfg.mode = parse_mode(o.mode);
  if (cfg.mode == ParsingMode::kNonPositional) {
    cfg.stopwords = o.stopwords_path.empty() ? default_stopwords()
                                             : load_stopwords(o.stopwords_path);
  }
  IngestResult ing = ingest_file(corpus_path, cfg);
  PostingLists lists = cfg.mode == ParsingMode::kNonPositional
                           ? build_nonpositional(ing.corpus, ing.vocab)
                           : build_positional(ing.corpus, ing.vocab);
  return materialize(lists, ing.vocab, ing.corpus, parse_repr(o.repr),
                     make_params(o));
}

QueryKind parse_kind(const std::string& kind) {
  if (kind == "word-low-freq") return QueryKind::kWordLowFreq;
  if (kind == "word-high-freq") return QueryKind::kWordHighFreq;
  if (kind == "conjunctive") return QueryKind::kConjunctive;
  if (kind == "phrase") return QueryKind::kPhrase;
  throw Error("unknown query kind '" + kind +
              "' (valid: word-low-freq, word-high-freq, conjunctive, phrase)");
}

std::vector<uint64_t> eval_query(const IndexImage& img, QueryKind kind,
                                 const Query& q, Algorithm alg,
                                 WorkCounters* wc) {
  if (kind == QueryKind::kPhrase) return phrase_query(img, q.term_ids, alg, wc);
  return run_query(img, q.term_ids, alg, wc);
}

int cmd_build(const std::string& corpus_path, const std::string& out_path,
              const CommonOpts& o) {
  IndexImage img = build_image(corpus_path, o);
  img.save(out_path);
  auto z = img.section_sizes();
  std::printf("built %s mode=%s repr=%s\n", out_path.c_str(), o.mode.c_str(),
              repr_name(img.repr));
  std::printf("terms=%u lists=%u universe=%llu total_tokens=%llu\n",
              img.term_count(), img.term_count(),
              static_cast<unsigned long long>(img.universe),
              static_cast<unsigned long long>(img.total_tokens));
  if (repr_is_repair(img.repr)) {
    std::printf("grammar rules=%u reduced_len=%zu\n", img.grammar.rule_count,
                img.clists.seq.size());
  }
  std::printf("bytes total=%llu payload=%llu samples=%llu vocab=%llu "
              "directory=%llu\n",
              static_cast<unsigned long long>(z.total()),
              static_cast<unsigned long long>(z.payload),
              static_cast<unsigned long long>(z.samples),
              static_cast<unsigned long long>(z.vocabulary),
              static_cast<unsigned long long>(z.directory));
  return 0;
}

int cmd_query(const std::string& index_path, const std::string& query_path,
              const std::string& kind_name, const std::string& alg_name,
              uint64_t max_results) {
  IndexImage img = IndexImage::load(index_path);
  QueryKind kind = parse_kind(kind_name);
  Algorithm alg = parse_algorithm(alg_name);
  QuerySet qs = load_queries(query_path, kind, img.vocab);
  for (size_t i = 0; i < qs.queries.size(); ++i) {
    std::vector<uint64_t> res = eval_query(img, kind, qs.queries[i], alg, nullptr);
    std::printf("%zu\t%zu", i + 1, res.size());
    uint64_t shown = 0;
    for (uint64_t v : res) {
      if (shown++ >= max_results) break;
      std::printf("\t%llu", static_cast<unsigned long long>(v));
    }
    std::printf("\n");
  }
  return 0;
}

int cmd_stats(const std::string& index_path) {
  IndexImage img = IndexImage::load(index_path);
  auto z = img.section_sizes();
  std::printf("repr\t%s\n", repr_name(img.repr));
  std::printf("mode\t%s\n",
              img.mode == ParsingMode::kNonPositional ? "nonpos" : "pos");
  std::printf("terms\t%u\n", img.term_count());
  std::printf("universe\t%llu\n", static_cast<unsigned long long>(img.universe));
  std::printf("docs\t%llu\n", static_cast<unsigned long long>(img.doc_count));
  std::printf("original_bytes\t%llu\n",
              static_cast<unsigned long long>(img.original_byte_size));
  std::printf("bytes_total\t%llu\n", static_cast<unsigned long long>(z.total()));
  std::printf("bytes_header\t%llu\n", static_cast<unsigned long long>(z.header));
  std::printf("bytes_vocabulary\t%llu\n",
              static_cast<unsigned long long>(z.vocabulary));
  std::printf("bytes_directory\t%llu\n",
              static_cast<unsigned long long>(z.directory));
  std::printf("bytes_payload\t%llu\n", static_cast<unsigned long long>(z.payload));
  std::printf("bytes_samples\t%llu\n", static_cast<unsigned long long>(z.samples));
  std::printf("bytes_doc_starts\t%llu\n",
              static_cast<unsigned long long>(z.doc_starts));
  if (repr_is_repair(img.repr)) {
    std::printf("grammar_rules\t%u\n", img.grammar.rule_count);
    std::printf("reduced_len\t%zu\n", img.clists.seq.size());
  }
  return 0;
}

// One record per (index, query set): tab-separated key=value pairs. Timing
// uses the monotonic wall clock (the reference protocol used CPU user-time;
// at these scales single-threaded wall time tracks it closely).
int cmd_bench(const std::vector<std::string>& index_paths,
              const std::vector<std::string>& query_paths,
              const std::string& kind_name, const std::string& alg_name,
              uint32_t reps) {
  QueryKind kind = parse_kind(kind_name);
  Algorithm alg = parse_algorithm(alg_name);
  for (const std::string& ip : index_paths) {
    IndexImage img = IndexImage::load(ip);
    auto z = img.section_sizes();
    double space_pct = img.original_byte_size
                           ? 100.0 * static_cast<double>(z.total()) /
                                 static_cast<double>(img.original_byte_size)
                           : 0.0;
    for (const std::string& qp : query_paths) {
      QuerySet qs = load_queries(qp, kind, img.vocab);
      uint64_t occurrences = 0;
      double best_us = 0.0;
      for (uint32_t r = 0; r < reps; ++r) {
        uint64_t occ = 0;
        auto t0 = std::chrono::steady_clock::now();
        for (const Query& q : qs.queries) {
          occ += eval_query(img, kind, q, alg, nullptr).size();
        }
        auto t1 = std::chrono::steady_clock::now();
        double us =
            std::chrono::duration<double, std::micro>(t1 - t0).count();
        best_us += us;
        occurrences = occ;
      }
      double mean_us = best_us / reps;
      double us_per_occ = occurrences ? mean_us / occurrences : 0.0;
      std::printf(
          "bench\tindex=%s\trepr=%s\tqueries=%s\tkind=%s\talg=%s\treps=%u\t"
          "index_bytes=%llu\tspace_pct=%.3f\toccurrences=%llu\t"
          "mean_us=%.1f\tus_per_occ=%.4f\n",
          ip.c_str(), repr_name(img.repr), qp.c_str(), query_kind_name(kind),
          algorithm_name(alg), reps,
          static_cast<unsigned long long>(z.total()), space_pct,
          static_cast<unsigned long long>(occurrences), mean_us, us_per_occ);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compressed inverted-index toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string corpus_path, index_path, out_path, query_path;
  std::string kind_name = "conjunctive";
  std::string alg_name = "auto";
  uint64_t max_results = 10;
  uint32_t reps = 3;
  std::vector<std::string> index_paths, query_paths;

  auto add_build_opts = [&](CLI::App* c) {
    c->add_option("--mode", opts.mode, "nonpos or pos")
        ->check(CLI::IsMember({"nonpos", "pos"}));
    c->add_option("--repr", opts.repr, "posting-list representation");
    c->add_option("--k", opts.k, "positional sampling multiplier");
    c->add_option("--B", opts.B, "domain sampling bucket load");
    c->add_option("--rice-b", opts.rice_b, "Rice parameter, or auto");
    c->add_option("--ds", opts.ds, "sparse-bitmap sampling period");
    c->add_option("--stopwords", opts.stopwords_path, "stopword list file");
  };

  CLI::App* build = app.add_subcommand("build", "build an index image");
  build->add_option("corpus", corpus_path, "corpus file")->required();
  build->add_option("output", out_path, "output index file")->required();
  add_build_opts(build);

  CLI::App* query = app.add_subcommand("query", "run a query set");
  query->add_option("index", index_path, "index file")->required();
  query->add_option("queries", query_path, "query file")->required();
  query->add_option("--kind", kind_name,
                    "word-low-freq, word-high-freq, conjunctive, or phrase");
  query->add_option("--alg", alg_name, "auto, merge, svs, or bys");
  query->add_option("--max-results", max_results, "matches printed per query");

  CLI::App* bench = app.add_subcommand("bench", "time query sets over indexes");
  bench->add_option("--index", index_paths, "index file (repeatable)")->required();
  bench->add_option("--queries", query_paths, "query file (repeatable)")->required();
  bench->add_option("--kind", kind_name,
                    "word-low-freq, word-high-freq, conjunctive, or phrase");
  bench->add_option("--alg", alg_name, "auto, merge, svs, or bys");
  bench->add_option("--reps", reps, "repetitions to average over");

  CLI::App* stats = app.add_subcommand("stats", "per-section sizes of an index");
  stats->add_option("index", index_path, "index file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build(corpus_path, out_path, opts);
    if (query->parsed()) {
      return cmd_query(index_path, query_path, kind_name, alg_name, max_results);
    }
    if (bench->parsed()) {
      return cmd_bench(index_paths, query_paths, kind_name, alg_name, reps);
    }
    if (stats->parsed()) return cmd_stats(index_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
