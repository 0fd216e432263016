#include "anbx/cli/cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "anbx/error.hpp"
#include "anbx/results/bench.hpp"
#include "anbx/semantics/validate.hpp"
#include "anbx/service/server.hpp"
#include "anbx/service/workbench.hpp"
#include "anbx/syntax/parser.hpp"
#include "anbx/syntax/printer.hpp"
#include "anbx/transform/lowering.hpp"

namespace anbx::cli {

namespace fs = std::filesystem;
using adapters::Outcome;
using scheduler::TaskState;
using service::VerifyTool;
using service::Workbench;
using service::WorkbenchConfig;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

const char* color_of(Outcome o) {
  switch (o) {
    case Outcome::Attack: return "\033[31m";
    case Outcome::Safe: return "\033[32m";
    case Outcome::Inconclusive:
    case Outcome::Timeout: return "\033[38;5;208m";
    case Outcome::ToolError: return nullptr;
  }
  return nullptr;
}

constexpr const char* kReset = "\033[0m";

struct Options {
  std::string config_path;
  bool no_color = false;

  std::vector<std::string> files;
  std::string out_dir;
  std::string target = "anb";
  std::string tool = "ofmc";
  std::string name;
  std::string log_dir;
  std::string mock_script;
  std::string theory;
  std::string host = "127.0.0.1";
  int port = 8080;
  int sessions = 1;
  int repetitions = 1;
  int timeout = -1;
  int max_parallel = 0;
  bool single_goals = false;
  bool one_session_first = false;
  bool via_if = false;
  bool check_only = false;
  bool drop_comments = false;
  bool csv = false;
  std::vector<std::string> config_args;
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err, const CliEnv& env)
      : o_(o), out_(out), err_(err), env_(env) {}

  int init() {
    fs::path dir = o_.files.empty() ? fs::current_path() : fs::path(o_.files[0]);
    std::string name = o_.name.empty() ? fs::absolute(dir).lexically_normal().filename().string() : o_.name;
    name = identifier(name);
    fs::create_directories(dir);
    fs::path file = dir / (name + ".AnBx");
    if (fs::exists(file)) {
      err_ << "error: " << file.string() << " already exists\n";
      return kExitToolError;
    }
    std::ofstream f(file);
    f << stub_protocol(name);
    if (!f.flush()) throw Error("E-IO", "cannot write " + file.string());
    out_ << "created " << file.string() << "\n";
    return kExitOk;
  }

  int fmt() {
    int code = kExitOk;
    for (const auto& name : o_.files) {
      auto source = load(name);
      auto parsed = syntax::parse(source);
      if (!parsed.ok()) {
        print_diagnostics(name, parsed.diagnostics);
        code = kExitFindings;
        continue;
      }
      auto [header, interior] = comments(source.text);
      if (interior && !o_.drop_comments) {
        err_ << name << ": comments inside sections would be lost; rerun with --drop-comments\n";
        code = kExitFindings;
        continue;
      }
      std::string formatted = header + syntax::pretty_print(*parsed.model);
      if (formatted == source.text) continue;
      if (o_.check_only) {
        out_ << "would reformat " << name << "\n";
        code = kExitFindings;
        continue;
      }
      std::ofstream f(name, std::ios::binary | std::ios::trunc);
      f << formatted;
      if (!f.flush()) throw Error("E-IO", "cannot write " + name);
      out_ << "formatted " << name << "\n";
    }
    return code;
  }

  int check() {
    int code = kExitOk;
    for (const auto& name : o_.files) {
      auto diags = semantics::check_source(load(name));
      print_diagnostics(name, diags);
      if (syntax::has_errors(diags)) code = kExitFindings;
    }
    if (code == kExitOk) out_ << "ok\n";
    return code;
  }

  int split_goals() {
    int code = kExitOk;
    for (const auto& name : o_.files) {
      auto source = load(name);
      auto parsed = syntax::parse(source);
      if (!parsed.ok()) {
        print_diagnostics(name, parsed.diagnostics);
        code = kExitFindings;
        continue;
      }
      auto split = transform::split_goals(*parsed.model);
      if (!split.ok()) {
        print_diagnostics(name, split.diagnostics);
        code = kExitFindings;
        continue;
      }
      fs::path dir = o_.out_dir.empty() ? fs::path(name).parent_path() / "anbx-out" : fs::path(o_.out_dir);
      try {
        for (const auto& p : transform::write_models(split.models, dir)) out_ << p.string() << "\n";
      } catch (const std::runtime_error& e) {
        throw Error("E-IO", e.what());
      }
    }
    return code;
  }

  int compile() {
    auto wb = workbench();
    service::CompileRequest r;
    r.target = o_.target == "pv" ? service::CompileTarget::ProVerif : service::CompileTarget::AnB;
    r.single_goals = o_.single_goals;
    if (!o_.out_dir.empty()) r.out_dir = o_.out_dir;
    int code = kExitOk;
    auto stream = follow(*wb);
    for (const auto& name : o_.files) {
      r.path = name;
      auto report = wb->compile(r);
      print_diagnostics(name, report.diagnostics);
      if (!report.ok()) {
        code = kExitFindings;
        continue;
      }
      for (const auto& f : report.files) out_ << f.string() << "\n";
    }
    wb->scheduler().wait_idle();
    return std::max(code, task_exit(*wb));
  }

  int verify() {
    auto wb = workbench();
    auto stream = follow(*wb);
    int code = kExitOk;
    for (const auto& name : o_.files) {
      service::VerifyRequest r;
      r.path = name;
      r.tool = service::verify_tool_from_string(o_.tool);
      r.sessions = o_.sessions;
      r.one_session_first = o_.one_session_first;
      r.single_goals = o_.single_goals;
      r.via_if = o_.via_if;
      if (!o_.theory.empty()) r.theory = o_.theory;
      if (!o_.out_dir.empty()) r.out_dir = o_.out_dir;
      auto report = wb->verify(r);
      print_diagnostics(name, report.diagnostics);
      if (!report.ok()) code = kExitFindings;
    }
    wb->scheduler().wait_idle();
    stream.reset();
    print_results(*wb);
    int tasks = task_exit(*wb);
    if (code == kExitFindings || tasks == kExitFindings) return kExitFindings;
    return tasks;
  }

  int bench() {
    auto wb = workbench();
    std::vector<fs::path> corpus(o_.files.begin(), o_.files.end());
    std::optional<int> cap;
    if (o_.max_parallel > 0) cap = o_.max_parallel;
    std::optional<fs::path> out;
    if (!o_.out_dir.empty()) out = o_.out_dir;
    auto rows = wb->bench(corpus, service::verify_tool_from_string(o_.tool), o_.repetitions, o_.sessions, cap, out);
    out_ << (o_.csv ? results::format_bench_csv(rows) : results::format_bench_table(rows));
    for (const auto& r : rows)
      if (!r.status.empty()) return kExitToolError;
    return kExitOk;
  }

  int reconstruct() {
    auto wb = workbench();
    auto stream = follow(*wb);
    for (const auto& name : o_.files) wb->reconstruct(name);
    wb->scheduler().wait_idle();
    stream.reset();
    return task_exit(*wb);
  }

  int serve() {
    auto wb = workbench();
    service::HttpServer server(*wb);
    int port = server.start(o_.host, o_.port);
    out_ << "serving " << wb->workspace().string() << " on http://" << o_.host << ":" << port << "/\n" << std::flush;
    g_stop = false;
    auto old_int = std::signal(SIGINT, on_signal);
    auto old_term = std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
    std::signal(SIGINT, old_int);
    std::signal(SIGTERM, old_term);
    server.stop();
    wb->scheduler().kill_all();
    return kExitOk;
  }

  int config() {
    fs::path path = config_path();
    auto cfg = service::load_config(path);
    const std::string action = o_.config_args.empty() ? "show" : o_.config_args[0];
    if (action == "path") {
      out_ << path.string() << "\n";
      return kExitOk;
    }
    if (action == "set") {
      if (o_.config_args.size() != 3) throw Error("E-CONFIG", "usage: config set KEY VALUE");
      cfg = service::parse_config(service::serialize_config(cfg) + o_.config_args[1] + " = " + o_.config_args[2] +
                                  "\n");
      auto issues = service::validate_config(cfg);
      print_issues(issues);
      if (!issues.empty()) return kExitToolError;
      service::save_config(cfg, path);
      out_ << "saved " << path.string() << "\n";
      return kExitOk;
    }
    if (action != "show" && action != "validate") throw Error("E-CONFIG", "unknown config action '" + action + "'");
    if (action == "show") {
      out_ << "# " << path.string() << "\n" << service::serialize_config(cfg);
      for (const auto& [label, exe] : {std::pair{"anbxc", cfg.anbxc_path}, std::pair{"ofmc", cfg.ofmc_path},
                                       std::pair{"proverif", cfg.proverif_path}})
        if (exe) out_ << "# " << label << " version: " << service::probe_version(*exe) << "\n";
      for (const auto& l : service::help_links()) out_ << "# " << l.label << ": " << l.url << "\n";
    }
    auto issues = service::validate_config(cfg);
    print_issues(issues);
    if (action == "validate" && issues.empty()) out_ << "ok\n";
    return issues.empty() ? kExitOk : kExitToolError;
  }

 private:
  /// Keeps the scheduler's console output flowing to `out` while alive.
  class Follow {
   public:
    Follow(scheduler::EventHub& hub, std::ostream& out, bool color) : hub_(hub) {
      id_ = hub.add_listener([&out, color](const scheduler::Event& e) {
        if (e.type == scheduler::EventType::TaskStarted) {
          out << "[" << e.task << "] $ " << e.text << "\n";
        } else if (e.type == scheduler::EventType::OutputChunk) {
          std::string text = color ? colorize(e.text, e.hints) : e.text;
          if (text.empty() || text.back() != '\n') text += '\n';
          const std::string prefix = "[" + std::to_string(e.task) + "] ";
          for (std::size_t pos = 0; pos < text.size();) {
            auto end = text.find('\n', pos);
            out << prefix << std::string_view(text).substr(pos, end + 1 - pos);
            pos = end + 1;
          }
        }
        out.flush();
      });
    }
    ~Follow() { hub_.remove_listener(id_); }

   private:
    scheduler::EventHub& hub_;
    int id_ = 0;
  };

  std::unique_ptr<Follow> follow(Workbench& wb) {
    return std::make_unique<Follow>(wb.scheduler().events(), out_, colors_);
  }

  fs::path config_path() const {
    return o_.config_path.empty() ? service::default_config_path() : fs::path(o_.config_path);
  }

  std::unique_ptr<Workbench> workbench() {
    auto cfg = service::load_config(config_path());
    if (!o_.log_dir.empty()) cfg.log_root = fs::absolute(o_.log_dir);
    if (!o_.mock_script.empty()) cfg.mock_script = fs::absolute(o_.mock_script);
    if (o_.max_parallel < 0) throw Error("E-BADN", "--max-parallel must be at least 1");
    if (o_.max_parallel > 0) cfg.max_parallel = o_.max_parallel;
    if (o_.timeout >= 0) cfg.timeout_minutes = o_.timeout;
    colors_ = env_.terminal && cfg.console_colors && !o_.no_color;
    if (cfg.log_root) fs::create_directories(*cfg.log_root);
    return std::make_unique<Workbench>(cfg, fs::current_path());
  }

  static std::string identifier(std::string s) {
    for (auto& c : s)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) s = "P" + s;
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
  }

  static syntax::SourceFile load(const std::string& name) {
    try {
      return syntax::SourceFile::load(name);
    } catch (const std::exception& e) {
      throw Error("E-IO", e.what());
    }
  }

  /// The leading comment block, and whether comments appear after it.
  static std::pair<std::string, bool> comments(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string header;
    bool in_header = true;
    while (std::getline(in, line)) {
      auto first = line.find_first_not_of(" \t\r");
      if (in_header && (first == std::string::npos || line[first] == '#')) {
        header += line + "\n";
        continue;
      }
      in_header = false;
      if (line.find('#') != std::string::npos) return {trim_header(header), true};
    }
    return {trim_header(header), false};
  }

  static std::string trim_header(std::string header) {
    while (!header.empty() && header.find_first_not_of(" \t\r\n") == std::string::npos) header.clear();
    auto last = header.find_last_not_of(" \t\r\n");
    if (last == std::string::npos) return "";
    return header.substr(0, last + 1) + "\n";
  }

  void print_diagnostics(const std::string& name, const std::vector<syntax::Diagnostic>& diags) {
    for (const auto& d : diags) {
      out_ << name << ": " << syntax::format_diagnostic(d) << "\n";
      for (const auto& f : d.fixes) out_ << "  fix: " << f.label << "\n";
    }
  }

  void print_issues(const std::vector<service::ConfigIssue>& issues) {
    for (const auto& i : issues)
      err_ << i.code << " " << i.key << " " << i.path.string() << " (needs " << i.required_permissions << "): "
           << i.message << "\n";
  }

  void print_results(Workbench& wb) {
    auto view = wb.results().snapshot().ordered_view(false);
    if (view.empty()) return;
    out_ << "results:\n";
    for (const auto& p : view) {
      out_ << "  " << p.protocol << "\n";
      for (const auto& g : p.goals) {
        std::string status = adapters::to_string(g.status);
        const char* c = colors_ ? color_of(g.status) : nullptr;
        out_ << "    " << g.goal << "  " << (c ? c : "") << status << (c ? kReset : "");
        if (g.sessions) out_ << "  " << *g.sessions << (*g.sessions == 1 ? " session" : " sessions");
        out_ << "  " << g.tool << "\n";
      }
    }
  }

  /// Worst outcome over all tasks, Attack first.
  static int task_exit(Workbench& wb) {
    bool attack = false, timeout = false, failed = false, undecided = false;
    for (const auto& row : wb.scheduler().snapshot()) {
      if (row.state == TaskState::TimedOut) timeout = true;
      if (row.state == TaskState::Killed) failed = true;
      if (!row.outcome) continue;
      switch (row.outcome->outcome) {
        case Outcome::Attack: attack = true; break;
        case Outcome::Timeout: timeout = true; break;
        case Outcome::ToolError: failed = true; break;
        case Outcome::Inconclusive: undecided = true; break;
        case Outcome::Safe: break;
      }
    }
    if (attack) return kExitFindings;
    if (timeout) return kExitTimeout;
    if (failed) return kExitToolError;
    if (undecided) return kExitFindings;
    return kExitOk;
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
  CliEnv env_;
  bool colors_ = false;
};

}  // namespace

std::string colorize(const std::string& text, const std::vector<scheduler::SpanHint>& hints) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& h : hints) {
    if (h.offset < pos || h.offset + h.length > text.size()) continue;
    const char* c = color_of(h.outcome);
    if (!c) continue;
    out.append(text, pos, h.offset - pos);
    out += c;
    out.append(text, h.offset, h.length);
    out += kReset;
    pos = h.offset + h.length;
  }
  out.append(text, pos, std::string::npos);
  return out;
}

std::string stub_protocol(const std::string& name) {
  return "# " + name +
         ": A sends B a message on a fresh, authentic and confidential channel.\n"
         "Protocol: " +
         name +
         "\n\n"
         "Types:\n"
         "  Agent A,B;\n"
         "  Number Msg;\n"
         "  Certified A,B\n\n"
         "Knowledge:\n"
         "  A: A,B;\n"
         "  B: A,B\n\n"
         "Actions:\n"
         "  A -> B,@(A|B|B) : Msg\n\n"
         "Goals:\n"
         "  Msg secret between A,B\n"
         "  B authenticates A on Msg\n";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliEnv& env) {
  Options o;
  CLI::App app{"AnBx workbench: check, compile and verify security protocols", "anbxw"};
  app.require_subcommand(1);
  app.add_option("--config", o.config_path, "Configuration file (default: $ANBX_WORKBENCH_CONFIG or the user config)");
  app.add_flag("--no-color", o.no_color, "Never colour console output");

  auto* init = app.add_subcommand("init", "Create a project directory with a stub protocol");
  init->add_option("dir", o.files, "Project directory")->expected(0, 1);
  init->add_option("--name", o.name, "Protocol name");

  auto* fmt = app.add_subcommand("fmt", "Rewrite protocols in canonical form");
  fmt->add_option("files", o.files)->required()->check(CLI::ExistingFile);
  fmt->add_flag("--check", o.check_only, "Only report files that would change");
  fmt->add_flag("--drop-comments", o.drop_comments, "Allow dropping comments inside sections");

  auto* check = app.add_subcommand("check", "Print parse and semantic diagnostics");
  check->add_option("files", o.files)->required()->check(CLI::ExistingFile);

  auto* compile = app.add_subcommand("compile", "Compile AnBx to AnB, or to ProVerif through the AnBx compiler");
  compile->add_option("files", o.files)->required()->check(CLI::ExistingFile);
  compile->add_option("--target", o.target, "anb or pv")->check(CLI::IsMember({"anb", "pv"}));
  compile->add_flag("--single-goals", o.single_goals, "One output per goal");
  compile->add_option("--out", o.out_dir, "Output directory (default: anbx-out next to the source)");

  auto* split = app.add_subcommand("split-goals", "Write one protocol file per goal");
  split->add_option("files", o.files)->required()->check(CLI::ExistingFile);
  split->add_option("--out", o.out_dir, "Output directory (default: anbx-out next to the source)");

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--tool", o.tool, "ofmc, proverif or mock")->check(CLI::IsMember({"ofmc", "proverif", "mock"}));
    cmd->add_option("--sessions", o.sessions, "Number of sessions (OFMC)")->check(CLI::PositiveNumber);
    cmd->add_option("--max-parallel", o.max_parallel, "Tasks running at once")->check(CLI::PositiveNumber);
    cmd->add_option("--timeout", o.timeout, "Minutes before a task is stopped (0: never)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--log-dir", o.log_dir, "Write one log file per task under this directory");
    cmd->add_option("--mock-script", o.mock_script, "Script for the mock verifier")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_dir, "Directory for generated files");
  };

  auto* verify = app.add_subcommand("verify", "Verify protocols and list results, failing goals first");
  verify->add_option("files", o.files)->required()->check(CLI::ExistingFile);
  add_run_flags(verify);
  verify->add_flag("--single-goals", o.single_goals, "Verify each goal separately, in parallel");
  verify->add_flag("--one-session-first", o.one_session_first, "Run one session first, then the full count if safe");
  verify->add_flag("--via-if", o.via_if, "Translate to IF before verifying (OFMC)");
  verify->add_option("--theory", o.theory, "Algebraic theory file for OFMC")->check(CLI::ExistingFile);

  auto* bench = app.add_subcommand("bench", "Compare all-goals and single-goal verification times");
  bench->add_option("files", o.files)->required()->check(CLI::ExistingFile);
  add_run_flags(bench);
  bench->add_option("--reps", o.repetitions, "Repetitions to average")->check(CLI::PositiveNumber);
  bench->add_flag("--csv", o.csv, "CSV instead of a table");

  auto* reconstruct = app.add_subcommand("reconstruct", "Export to AnB, verify with OFMC, rebuild any attack trace");
  reconstruct->add_option("files", o.files)->required()->check(CLI::ExistingFile);
  add_run_flags(reconstruct);

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API for the current directory");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--port", o.port, "Port (0 picks a free one)");
  add_run_flags(serve);

  auto* config = app.add_subcommand("config", "Show, validate or change the configuration");
  config->add_option("action", o.config_args, "show | validate | path | set KEY VALUE");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitToolError;
  }

  Runner run(o, out, err, env);
  try {
    if (*init) return run.init();
    if (*fmt) return run.fmt();
    if (*check) return run.check();
    if (*compile) return run.compile();
    if (*split) return run.split_goals();
    if (*verify) return run.verify();
    if (*bench) return run.bench();
    if (*reconstruct) return run.reconstruct();
    if (*serve) return run.serve();
    if (*config) return run.config();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitToolError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitToolError;
  }
  return kExitToolError;
}

}  // namespace anbx::cli
