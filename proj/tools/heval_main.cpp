#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heval/corpus.hpp"
#include "heval/error.hpp"
#include "heval/interchange.hpp"
#include "heval/reference_fixtures.hpp"
#include "heval/reports.hpp"
#include "heval/service.hpp"
#include "heval/simulate.hpp"
#include "heval/store.hpp"

namespace fs = std::filesystem;
using namespace heval;

namespace {

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kValidation = 3,
  kVerification = 4,
  kInternal = 5,
};

std::string escaped(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

void print_error(std::string_view kind, std::string_view message, const Error* detail = nullptr) {
  std::string line = "error: kind=" + std::string(kind);
  if (detail) {
    if (detail->ordinal) line += " ordinal=" + std::to_string(*detail->ordinal);
    if (detail->value) line += " value=" + std::to_string(*detail->value);
    if (detail->line) line += " line=" + std::to_string(*detail->line);
    if (!detail->subject.empty()) line += " subject=" + escaped(detail->subject);
  }
  line += " message=" + escaped(message);
  std::cerr << line << "\n";
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) {
    throw Error(ErrorCode::Io, "cannot write " + path);
  }
}

fs::path require_dir(const std::string& dir) {
  if (dir.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "no campaign directory given and HEVAL_CAMPAIGN_DIR is not set");
  }
  return dir;
}

struct InitArgs {
  std::string dir;
  std::string source;
  std::vector<std::string> engines;
  std::string constructs;
  std::string id;
  std::size_t doc_size = 100;
  std::uint64_t seed = 0;
  int scale_min = 1;
  int scale_max = 5;
};

int run_init(const InitArgs& a) {
  const fs::path dir = require_dir(a.dir);
  std::vector<corpus::EngineOutput> outputs;
  for (const auto& spec : a.engines) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw Error(ErrorCode::InvalidArgument, "--engine expects <id>=<file>, got '" + spec + "'");
    }
    const std::string id = spec.substr(0, eq);
    outputs.push_back({{id, id}, read_file(spec.substr(eq + 1))});
  }
  CampaignStore::CreateOptions options;
  options.config.id = a.id.empty() ? dir.filename().string() : a.id;
  if (options.config.id.empty()) options.config.id = fs::absolute(dir).parent_path().filename();
  options.config.rng_seed = a.seed;
  options.config.external_scale = {a.scale_min, a.scale_max};
  options.document_size = a.doc_size;
  if (!a.constructs.empty()) options.constructs = corpus::parse_constructs(read_file(a.constructs));

  const auto store = CampaignStore::create(dir, read_file(a.source), outputs, options);
  const auto snap = store.snapshot();
  const auto stats = corpus::corpus_stats(snap->corpus());
  std::cout << "campaign=" << snap->config().id << " sentences=" << stats.sentences
            << " words=" << stats.words << " unique_words=" << stats.unique_words
            << " engines=" << snap->corpus().engines.size()
            << " documents=" << snap->corpus().document_count() << " seed=" << a.seed << "\n";
  return kOk;
}

struct SimulateArgs {
  std::string dir;
  int judges = 2;
  std::string profile = "identical";
  std::uint64_t seed = 0;
  std::string quality;
  double na_rate = 0.0;
  bool no_external = false;
  std::size_t sentences = 200;
  std::size_t engines = 5;
  std::size_t doc_size = 100;
};

int run_simulate(const SimulateArgs& a) {
  const fs::path dir = require_dir(a.dir);
  simulate::SimulationOptions options;
  options.judges = a.judges;
  options.profile = simulate::parse_profile(a.profile);
  options.seed = a.seed;
  if (!a.quality.empty()) options.quality = simulate::parse_quality(a.quality);
  options.na_rate = a.na_rate;
  options.external = !a.no_external;

  bool created = false;
  std::optional<CampaignStore> store;
  simulate::SimulationResult result;
  if (CampaignStore::exists(dir)) {
    store.emplace(CampaignStore::open(dir));
    result = simulate::simulate(*store->snapshot(), options);
  } else {
    if (a.sentences == 0 || a.engines == 0) {
      throw Error(ErrorCode::InvalidArgument, "--sentences and --engines must be positive");
    }
    CampaignStore::CreateOptions create;
    create.config.id = dir.filename().empty() ? "synthetic" : dir.filename().string();
    create.config.rng_seed = a.seed;
    create.document_size = a.doc_size;
    const auto source = simulate::synthetic_source(a.sentences);
    const auto outputs = simulate::synthetic_outputs(a.sentences, a.engines);
    // Simulate against an in-memory copy first so bad options leave no directory behind.
    const Campaign probe(create.config, std::make_shared<const corpus::Corpus>(corpus::import_corpus(
                                            source, outputs, create.document_size)));
    result = simulate::simulate(probe, options);
    store.emplace(CampaignStore::create(dir, source, outputs, create));
    created = true;
  }
  simulate::apply(*store, result);

  std::string judges;
  for (const auto& j : result.judges) judges += (judges.empty() ? "" : ",") + j.id;
  std::cout << "campaign=" << store->snapshot()->config().id << (created ? " created" : "")
            << " profile=" << simulate::profile_name(options.profile) << " seed=" << a.seed
            << " judges=" << judges << " annotations=" << result.annotations.size()
            << " external=" << result.external.size() << "\n";
  return kOk;
}

int run_verify(bool verbose) {
  const auto v = reference::verify();
  auto section = [&](const char* title, const std::vector<reference::CheckResult>& checks) {
    std::size_t ok = 0;
    for (const auto& c : checks) {
      ok += c.passed ? 1 : 0;
      if (verbose || !c.passed) {
        std::cout << (c.passed ? "  pass " : "  FAIL ") << c.label << ": expected "
                  << c.expected << ", computed " << c.computed << "\n";
      }
    }
    std::cout << title << ": " << ok << "/" << checks.size() << " matched\n";
  };
  section("overall scores", v.score_checks);
  section("agreement percentages", v.percentage_checks);
  std::cout << (v.passed() ? "verification passed" : "verification FAILED") << "\n";
  return v.passed() ? kOk : kVerification;
}

int run_serve(const std::string& dir_arg, const std::string& listen) {
  const fs::path dir = require_dir(dir_arg);
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "--listen expects host:port, got '" + listen + "'");
  }
  const std::string host = listen.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "bad port in '" + listen + "'");
  }
  if (port < 0 || port > 65535) throw Error(ErrorCode::InvalidArgument, "port out of range");
  fs::create_directories(dir);
  service::Server server(dir);
  std::string ids;
  for (const auto& id : server.campaign_ids()) ids += (ids.empty() ? "" : ",") + id;
  std::cout << "listening on " << host << ":" << port << " campaigns=" << ids << std::endl;
  if (!server.listen(host, port)) throw Error(ErrorCode::Io, "cannot listen on " + listen);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Human evaluation workbench for machine translation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "heval 0.1.0");

  auto dir_option = [](CLI::App* cmd, std::string& dir) {
    cmd->add_option("dir", dir, "Campaign directory")->envname("HEVAL_CAMPAIGN_DIR");
  };

  InitArgs init;
  auto* init_cmd = app.add_subcommand("init", "Create a campaign from a source file and engine outputs");
  dir_option(init_cmd, init.dir);
  init_cmd->add_option("--source", init.source, "Source sentences, one per line")->required();
  init_cmd->add_option("--engine", init.engines, "Engine output as <id>=<file>, repeatable")
      ->required();
  init_cmd->add_option("--doc-size", init.doc_size, "Sentences per document")
      ->check(CLI::PositiveNumber);
  init_cmd->add_option("--seed", init.seed, "Seed for blinded ordering");
  init_cmd->add_option("--constructs", init.constructs, "Construct tag per source line");
  init_cmd->add_option("--id", init.id, "Campaign id (default: directory name)");
  init_cmd->add_option("--scale-min", init.scale_min, "Lowest adequacy/fluency level");
  init_cmd->add_option("--scale-max", init.scale_max, "Highest adequacy/fluency level");

  std::string scores_dir, scores_csv, scores_measure;
  auto* scores_cmd = app.add_subcommand("import-scores", "Import adequacy or fluency levels");
  dir_option(scores_cmd, scores_dir);
  scores_cmd->add_option("csv", scores_csv, "CSV with sentence,engine[,measure],level")
      ->required();
  scores_cmd->add_option("--measure", scores_measure, "adequacy or fluency");

  std::string report_dir, report_kind, report_judge, report_subset, report_format = "csv",
                                                                    report_output;
  auto* report_cmd = app.add_subcommand("report", "Print a report");
  dir_option(report_cmd, report_dir);
  report_cmd->add_option("--kind", report_kind, "system|documents|ranking|agreement|correlation")
      ->required();
  report_cmd->add_option("--judge", report_judge, "Judge id(s), comma separated");
  report_cmd->add_option("--subset", report_subset, "Engine ids, comma separated");
  report_cmd->add_option("--format", report_format, "csv or json");
  report_cmd->add_option("--output,-o", report_output, "Write to a file instead of stdout");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Add synthetic judges and annotations");
  dir_option(sim_cmd, sim.dir);
  sim_cmd->add_option("--judges", sim.judges, "Number of simulated judges");
  sim_cmd->add_option("--profile", sim.profile,
                      "identical | independent-uniform | perturb(p,delta)");
  sim_cmd->add_option("--seed", sim.seed, "Random seed");
  sim_cmd->add_option("--quality", sim.quality, "Per-engine quality, e.g. E1=0.8,E2=0.3");
  sim_cmd->add_option("--na-rate", sim.na_rate, "Probability a feature is not applicable");
  sim_cmd->add_flag("--no-external", sim.no_external, "Skip adequacy/fluency levels");
  sim_cmd->add_option("--sentences", sim.sentences, "Corpus size when creating a campaign");
  sim_cmd->add_option("--engines", sim.engines, "Engine count when creating a campaign");
  sim_cmd->add_option("--doc-size", sim.doc_size, "Sentences per document when creating")
      ->check(CLI::PositiveNumber);

  bool verify_verbose = false;
  auto* verify_cmd =
      app.add_subcommand("verify-paper", "Check the bundled reference scores and percentages");
  verify_cmd->add_flag("--verbose,-v", verify_verbose, "Print every check");

  std::string serve_dir, serve_listen = "127.0.0.1:8080";
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  dir_option(serve_cmd, serve_dir);
  serve_cmd->add_option("--listen", serve_listen, "host:port");

  std::string export_dir, export_output;
  auto* export_cmd = app.add_subcommand("export-annotations", "Write all annotations as CSV");
  dir_option(export_cmd, export_dir);
  export_cmd->add_option("--output,-o", export_output, "Write to a file instead of stdout");

  std::string export_scores_dir, export_scores_output;
  auto* export_scores_cmd =
      app.add_subcommand("export-scores", "Write adequacy/fluency levels as CSV");
  dir_option(export_scores_cmd, export_scores_dir);
  export_scores_cmd->add_option("--output,-o", export_scores_output,
                                "Write to a file instead of stdout");

  std::string import_dir, import_csv;
  auto* import_cmd = app.add_subcommand("import-annotations", "Import an annotation CSV");
  dir_option(import_cmd, import_dir);
  import_cmd->add_option("csv", import_csv, "CSV written by export-annotations")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("Usage", e.what());
    return kUsage;
  }

  try {
    if (*init_cmd) return run_init(init);
    if (*scores_cmd) {
      auto store = CampaignStore::open(require_dir(scores_dir));
      std::optional<Measure> measure;
      if (!scores_measure.empty()) measure = parse_measure(scores_measure);
      const auto n = store.import_external_csv(read_file(scores_csv), measure);
      std::cout << "imported=" << n << "\n";
      return kOk;
    }
    if (*report_cmd) {
      const auto store = CampaignStore::open(require_dir(report_dir));
      reports::ReportRequest request;
      request.kind = reports::parse_report_kind(report_kind);
      request.judges = reports::split_list(report_judge);
      request.subset = reports::split_list(report_subset);
      write_output(reports::render_report(store.snapshot(), request,
                                          reports::parse_report_format(report_format)),
                   report_output);
      return kOk;
    }
    if (*sim_cmd) return run_simulate(sim);
    if (*verify_cmd) return run_verify(verify_verbose);
    if (*serve_cmd) return run_serve(serve_dir, serve_listen);
    if (*export_cmd) {
      const auto store = CampaignStore::open(require_dir(export_dir));
      write_output(interchange::export_annotations_csv(*store.snapshot()), export_output);
      return kOk;
    }
    if (*export_scores_cmd) {
      const auto store = CampaignStore::open(require_dir(export_scores_dir));
      write_output(interchange::export_external_csv(*store.snapshot()), export_scores_output);
      return kOk;
    }
    if (*import_cmd) {
      auto store = CampaignStore::open(require_dir(import_dir));
      const auto n = store.import_annotations_csv(read_file(import_csv));
      std::cout << "imported=" << n << "\n";
      return kOk;
    }
  } catch (const Error& e) {
    print_error(error_code_name(e.code()), e.what(), &e);
    return is_validation_error(e.code()) ? kValidation : kIo;
  } catch (const fs::filesystem_error& e) {
    print_error("Io", e.what());
    return kIo;
  } catch (const std::exception& e) {
    print_error("Internal", e.what());
    return kInternal;
  }
  return kUsage;
}
