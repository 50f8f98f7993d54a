// csanitize: enforce information-theoretic redaction/sanitization policies
// on plain-text documents against a reference-corpus index.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csanitize/corpus_index.hpp"
#include "csanitize/docio.hpp"
#include "csanitize/errors.hpp"
#include "csanitize/log.hpp"
#include "csanitize/metrics.hpp"
#include "csanitize/report.hpp"
#include "csanitize/risk.hpp"
#include "csanitize/sanitizer.hpp"
#include "csanitize/taxonomy.hpp"
#include "csanitize/text.hpp"

namespace fs = std::filesystem;
using namespace csan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitEntityNotInCorpus = 3;
constexpr int kExitGroupBudget = 4;

struct IndexArgs {
  std::string corpus;
  std::string taxonomy;
  std::string unit = "document";
  std::string stopwords;
  std::string out;
  bool lines = false;
};

struct RunArgs {
  std::string index;
  std::string taxonomy;
  std::vector<std::string> entities;
  double alpha = 1.0;
  std::string mode = "sanitize";
  std::string context = "document";
  std::size_t group_max = 1;
  std::size_t group_budget = 10000;
  bool strict_unseen = false;
  std::string stopwords;
  std::vector<std::string> inputs;
  std::string out_dir;
  bool lines = false;
  unsigned jobs = 1;
  bool no_report = false;
};

struct EvalArgs {
  std::vector<std::string> reports;
  std::string gold;
  std::string taxonomy;
  std::string json_out;
};

StopwordList load_stopwords(const std::string& path) {
  return path.empty() ? StopwordList::defaults() : StopwordList::load(path);
}

std::string fmt_pct(const std::optional<double>& v, const char* why_na) {
  if (!v.has_value()) return std::string("n/a (") + why_na + ")";
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << *v << "%";
  return os.str();
}

int cmd_index(const IndexArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  Taxonomy taxonomy = load_taxonomy(args.taxonomy);
  Vocabulary vocab(taxonomy, load_stopwords(args.stopwords));
  ContextUnit unit = context_unit_from_string(args.unit);

  std::vector<RawDocument> raw = read_documents(args.corpus, args.lines);
  if (raw.empty()) throw InputError("empty corpus: " + args.corpus);

  std::vector<Document> docs;
  docs.reserve(raw.size());
  for (RawDocument& rd : raw) {
    docs.push_back(
        prepare_document(std::move(rd.doc_id), std::move(rd.text), unit, vocab));
  }
  CorpusIndex index = build_index(docs, unit, taxonomy);
  index.save(args.out);

  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::cout << "contexts: " << index.total_contexts() << "\n"
            << "vocabulary: " << index.vocabulary_size() << " terms\n"
            << "build time: " << ms << " ms\n"
            << "written: " << args.out << "\n";
  return kExitOk;
}

int cmd_run(const RunArgs& args) {
  Taxonomy taxonomy = load_taxonomy(args.taxonomy);
  CorpusIndex index = CorpusIndex::load(args.index, taxonomy);

  SanitizationPolicy policy;
  for (const std::string& e : args.entities) {
    CanonicalTerm c = taxonomy.canonicalize(e);
    if (std::find(policy.entities.begin(), policy.entities.end(), c) ==
        policy.entities.end()) {
      policy.entities.push_back(c);
    }
  }
  policy.alpha = args.alpha;
  policy.mode = sanitize_mode_from_string(args.mode);
  policy.context_unit = context_unit_from_string(args.context);
  policy.group_max = args.group_max;
  policy.group_budget = args.group_budget;
  policy.strict_unseen = args.strict_unseen;
  policy.validate();

  Vocabulary vocab(taxonomy, load_stopwords(args.stopwords));
  vocab.add_terms(index.vocabulary());
  vocab.add_terms(policy.entities);

  std::vector<RawDocument> raw;
  for (const std::string& input : args.inputs) {
    std::vector<RawDocument> part = read_documents(input, args.lines);
    raw.insert(raw.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  if (raw.empty()) throw InputError("no input documents");

  fs::create_directories(args.out_dir);

  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> all_verified{true};
  std::mutex print_mutex;
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= raw.size()) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        Document doc = prepare_document(raw[i].doc_id, raw[i].text,
                                        policy.context_unit, vocab);
        SanitizeOutcome outcome =
            sanitize(doc, index, taxonomy, vocab, policy);

        fs::path out_text =
            fs::path(args.out_dir) / (doc.doc_id + ".sanitized.txt");
        write_text_atomic(out_text, outcome.sanitized.output_text);
        if (!args.no_report) {
          SanitizationReport report = make_report(outcome);
          fs::path out_report =
              fs::path(args.out_dir) / (doc.doc_id + ".report.json");
          write_text_atomic(out_report, report.to_json().dump(2) + "\n");
        }
        if (!outcome.verification_passed) all_verified = false;

        std::lock_guard<std::mutex> lock(print_mutex);
        std::cout << "doc " << doc.doc_id << ": "
                  << outcome.findings.size() << " finding(s), "
                  << outcome.sanitized.replacements.size()
                  << " replacement(s), verification "
                  << (outcome.verification_passed ? "ok" : "FAILED") << "\n";
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  unsigned jobs = std::max(1u, args.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  if (!all_verified) {
    log::error("one or more documents failed verification");
    return kExitInternal;
  }
  return kExitOk;
}

int cmd_eval(const EvalArgs& args) {
  std::vector<SanitizationReport> reports;
  for (const std::string& entry : args.reports) {
    fs::path p(entry);
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(p)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.size() > 12 &&
            name.substr(name.size() - 12) == ".report.json") {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      for (const fs::path& f : files) reports.push_back(load_report(f));
    } else {
      reports.push_back(load_report(p));
    }
  }
  if (reports.empty()) throw InputError("no reports to evaluate");

  Taxonomy taxonomy;
  if (!args.taxonomy.empty()) taxonomy = load_taxonomy(args.taxonomy);

  std::vector<GoldAnnotation> gold;
  if (!args.gold.empty()) gold = load_gold_annotations(args.gold, taxonomy);

  nlohmann::json jdocs = nlohmann::json::array();
  std::cout << std::left << std::setw(24) << "doc" << std::setw(16)
            << "precision" << std::setw(16) << "recall" << std::setw(16)
            << "f-measure" << std::setw(20) << "utility-preservation"
            << "\n";

  for (const SanitizationReport& report : reports) {
    TermSet system;
    for (const RiskFinding& f : report.findings) {
      for (const CanonicalTerm& t : f.terms) {
        system.insert(taxonomy.canonicalize(t));
      }
    }

    std::optional<double> p, r, f1;
    if (!args.gold.empty()) {
      auto it = std::find_if(gold.begin(), gold.end(),
                             [&](const GoldAnnotation& g) {
                               return g.doc_id == report.doc_id;
                             });
      if (it == gold.end()) {
        throw InputError("gold file has no annotation for doc '" +
                         report.doc_id + "'");
      }
      p = precision(system, it->sensitive_terms);
      r = recall(system, it->sensitive_terms);
      f1 = f_measure(p, r);
    }

    std::cout << std::left << std::setw(24) << report.doc_id << std::setw(16)
              << fmt_pct(p, args.gold.empty() ? "no gold" : "empty S")
              << std::setw(16)
              << fmt_pct(r, args.gold.empty() ? "no gold" : "empty H")
              << std::setw(16) << fmt_pct(f1, "undefined input")
              << std::setw(20)
              << fmt_pct(report.preservation_pct, "zero-utility original")
              << "\n";

    nlohmann::json jd;
    jd["doc_id"] = report.doc_id;
    jd["precision_pct"] = p.has_value() ? nlohmann::json(*p) : nullptr;
    jd["recall_pct"] = r.has_value() ? nlohmann::json(*r) : nullptr;
    jd["f_measure_pct"] = f1.has_value() ? nlohmann::json(*f1) : nullptr;
    jd["utility_preservation_pct"] = report.preservation_pct.has_value()
                                         ? nlohmann::json(*report.preservation_pct)
                                         : nullptr;
    jd["detected_terms"] = nlohmann::json::array();
    for (const CanonicalTerm& t : system) jd["detected_terms"].push_back(t.id());
    jdocs.push_back(std::move(jd));
  }

  if (!args.json_out.empty()) {
    nlohmann::json out;
    out["docs"] = std::move(jdocs);
    write_text_atomic(args.json_out, out.dump(2) + "\n");
  }
  return kExitOk;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const EntityNotInCorpusError& e) {
    std::cerr << "csanitize: error: " << e.what() << "\n";
    return kExitEntityNotInCorpus;
  } catch (const GroupBudgetError& e) {
    std::cerr << "csanitize: error: " << e.what() << "\n";
    return kExitGroupBudget;
  } catch (const InputError& e) {
    std::cerr << "csanitize: error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "csanitize: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "csanitize: information-theoretic document redaction/sanitization"};
  app.require_subcommand(1);

  IndexArgs index_args;
  CLI::App* index_cmd = app.add_subcommand(
      "index", "Build a co-occurrence index from a reference corpus");
  index_cmd->add_option("--corpus", index_args.corpus,
                        "Corpus file or directory of .txt files")
      ->required();
  index_cmd->add_option("--taxonomy", index_args.taxonomy,
                        "Taxonomy file (ISA/SYN records)")
      ->required();
  index_cmd->add_option("--unit", index_args.unit,
                        "Counting context: sentence|paragraph|document");
  index_cmd->add_option("--stopwords", index_args.stopwords,
                        "Stopword file overriding the built-in list");
  index_cmd->add_option("--out", index_args.out, "Output index file")
      ->required();
  index_cmd->add_flag("--lines", index_args.lines,
                      "Treat the corpus file as one document per line");

  RunArgs run_args;
  CLI::App* run_cmd =
      app.add_subcommand("run", "Sanitize or redact input documents");
  run_cmd->add_option("--index", run_args.index, "Index file from 'index'")
      ->required();
  run_cmd->add_option("--taxonomy", run_args.taxonomy, "Taxonomy file")
      ->required();
  run_cmd->add_option("--entity", run_args.entities,
                      "Protected entity (repeatable)")
      ->required();
  run_cmd->add_option("--alpha", run_args.alpha, "Strictness alpha (>= 1)");
  run_cmd->add_option("--mode", run_args.mode, "redact|sanitize");
  run_cmd->add_option("--context", run_args.context,
                      "Group-analysis context: sentence|paragraph|document");
  run_cmd->add_option("--group-max", run_args.group_max,
                      "Maximum term-group cardinality m (1 disables groups)");
  run_cmd->add_option("--group-budget", run_args.group_budget,
                      "Max group subsets evaluated per context");
  run_cmd->add_flag("--strict-unseen", run_args.strict_unseen,
                    "Treat corpus-unseen document terms as risky");
  run_cmd->add_option("--stopwords", run_args.stopwords, "Stopword file");
  run_cmd->add_option("--in", run_args.inputs,
                      "Input document file or directory (repeatable)")
      ->required();
  run_cmd->add_option("--out", run_args.out_dir, "Output directory")
      ->required();
  run_cmd->add_flag("--lines", run_args.lines,
                    "Treat input files as one document per line");
  run_cmd->add_option("--jobs", run_args.jobs, "Parallel worker count");
  run_cmd->add_flag("--no-report", run_args.no_report,
                    "Skip writing .report.json files");

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Score reports against a gold annotation");
  eval_cmd->add_option("--report", eval_args.reports,
                       "Report file or directory (repeatable)")
      ->required();
  eval_cmd->add_option("--gold", eval_args.gold,
                       "Gold annotation JSON file");
  eval_cmd->add_option("--taxonomy", eval_args.taxonomy,
                       "Taxonomy for canonicalizing terms");
  eval_cmd->add_option("--json", eval_args.json_out,
                       "Also write results as JSON to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;  // bad flags are input errors
  }

  if (index_cmd->parsed()) return guarded([&] { return cmd_index(index_args); });
  if (run_cmd->parsed()) return guarded([&] { return cmd_run(run_args); });
  if (eval_cmd->parsed()) return guarded([&] { return cmd_eval(eval_args); });
  return kExitInput;
}
