#include "anbx/service/workbench.hpp"

#include <unistd.h>

#include <algorithm>
#include <functional>

#include "anbx/adapters/tools.hpp"
#include "anbx/error.hpp"
#include "anbx/semantics/validate.hpp"
#include "anbx/syntax/parser.hpp"
#include "anbx/transform/lowering.hpp"

namespace anbx::service {

namespace fs = std::filesystem;
using adapters::Condition;
using adapters::PipelineStep;
using adapters::TaskKind;
using adapters::TaskSpec;
using adapters::Tool;
using syntax::Diagnostic;

std::string to_string(VerifyTool t) {
  switch (t) {
    case VerifyTool::Ofmc: return "ofmc";
    case VerifyTool::ProVerif: return "proverif";
    case VerifyTool::Mock: return "mock";
  }
  return "ofmc";
}

VerifyTool verify_tool_from_string(const std::string& name) {
  if (name == "ofmc") return VerifyTool::Ofmc;
  if (name == "proverif") return VerifyTool::ProVerif;
  if (name == "mock") return VerifyTool::Mock;
  throw Error("E-CONFIG", "unknown verifier '" + name + "' (expected ofmc, proverif or mock)");
}

std::optional<fs::path> find_mock_binary() {
  std::error_code ec;
  auto self = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    for (auto dir : {self.parent_path(), self.parent_path().parent_path() / "tools"}) {
      auto candidate = dir / "anbx-mock";
      if (::access(candidate.c_str(), X_OK) == 0) return candidate;
    }
  }
  try {
    return adapters::resolve_executable("anbx-mock");
  } catch (const Error&) {
    return std::nullopt;
  }
}

namespace {

struct Loaded {
  syntax::SourceFile source;
  std::optional<syntax::ProtocolModel> model;
  std::vector<Diagnostic> diagnostics;
};

Loaded load(const fs::path& path) {
  Loaded l;
  try {
    l.source = syntax::SourceFile::load(path);
  } catch (const std::exception& e) {
    throw Error("E-IO", e.what());
  }
  auto parsed = syntax::parse(l.source);
  if (!parsed.ok()) {
    l.diagnostics = parsed.diagnostics;
    return l;
  }
  l.model = std::move(parsed.model);
  l.diagnostics = semantics::check_source(l.source);
  return l;
}

/// The model as plain AnB, or diagnostics explaining why not.
std::optional<syntax::ProtocolModel> as_anb(Loaded& l) {
  if (!l.model || syntax::has_errors(l.diagnostics)) return std::nullopt;
  if (l.model->dialect == syntax::Dialect::AnB) return l.model;
  auto lowered = transform::compile_channels(*l.model);
  if (!lowered.ok()) {
    l.diagnostics.insert(l.diagnostics.end(), lowered.diagnostics.begin(), lowered.diagnostics.end());
    return std::nullopt;
  }
  return lowered.model;
}

std::string goal_label(std::size_t index) { return "g" + std::to_string(index + 1); }

fs::path write_one(const syntax::ProtocolModel& m, const fs::path& dir) {
  try {
    return transform::write_models({m}, dir).front();
  } catch (const std::exception& e) {
    throw Error("E-IO", e.what());
  }
}

/// Single-goal copies written to `dir`; diagnostics if there are no goals.
std::vector<fs::path> write_split(const syntax::ProtocolModel& m, const fs::path& dir, std::vector<Diagnostic>& diags) {
  auto split = transform::split_goals(m);
  if (!split.ok()) {
    diags.insert(diags.end(), split.diagnostics.begin(), split.diagnostics.end());
    return {};
  }
  try {
    return transform::write_models(split.models, dir);
  } catch (const std::exception& e) {
    throw Error("E-IO", e.what());
  }
}

TaskSpec ofmc_spec(const fs::path& exe, const fs::path& file, int sessions, const std::string& protocol,
                   const std::optional<std::string>& goal, const std::optional<fs::path>& theory) {
  TaskSpec s;
  s.kind = sessions == 1 ? TaskKind::OfmcOneSession : TaskKind::OfmcMultiSession;
  s.tool = Tool::Ofmc;
  s.plan = adapters::build_ofmc_invocation(exe, file, adapters::OfmcOptions{sessions, false, theory}).front();
  s.protocol = protocol;
  s.goal = goal;
  s.sessions = sessions;
  return s;
}

void label_tree(PipelineStep& step, const std::string& protocol, const std::optional<std::string>& goal) {
  step.task.protocol = protocol;
  if (step.task.tool == Tool::Ofmc || step.task.tool == Tool::ProVerif) step.task.goal = goal;
  for (auto& c : step.then) label_tree(c, protocol, goal);
}

fs::path pv_output_for(const fs::path& source) {
  auto p = source;
  return p.replace_extension(".pv");
}

}  // namespace

Workbench::Workbench(WorkbenchConfig config, fs::path workspace, std::shared_ptr<scheduler::Executor> executor,
                     std::optional<fs::path> config_path)
    : config_(std::move(config)),
      workspace_(fs::absolute(workspace)),
      executor_(executor ? std::move(executor) : std::make_shared<scheduler::ProcessExecutor>()),
      config_path_(std::move(config_path)) {
  scheduler::SchedulerConfig sc;
  if (config_.max_parallel > 0) sc.max_parallel = config_.max_parallel;
  if (config_.timeout_minutes < 0) throw Error("E-LIMIT", "timeout-minutes must not be negative");
  if (config_.max_parallel < 0) throw Error("E-LIMIT", "max-parallel must not be negative");
  sc.timeout_minutes = config_.timeout_minutes;
  sc.log_root = config_.log_root;
  scheduler_ = std::make_unique<scheduler::Scheduler>(sc, executor_);
  results_ = std::make_unique<results::ResultAggregator>(scheduler_->events());
}

Workbench::~Workbench() {
  // The aggregator listens on the scheduler's hub, so it goes first.
  results_.reset();
  scheduler_.reset();
}

fs::path Workbench::resolve(const fs::path& p) const { return p.is_absolute() ? p : workspace_ / p; }

std::vector<ProtocolInfo> Workbench::protocols() const {
  std::vector<ProtocolInfo> out;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(workspace_, fs::directory_options::skip_permission_denied, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    const auto& p = it->path();
    auto name = p.filename().string();
    if (it->is_directory() && (name == "anbx-out" || (!name.empty() && name[0] == '.'))) {
      it.disable_recursion_pending();
      continue;
    }
    auto ext = p.extension().string();
    if (!it->is_regular_file() || (ext != ".AnB" && ext != ".AnBx")) continue;
    ProtocolInfo info;
    info.path = fs::relative(p, workspace_);
    info.dialect = syntax::dialect_for_path(p);
    info.name = p.stem().string();
    try {
      auto l = load(p);
      if (l.model) {
        info.name = l.model->name.name;
        info.goals = static_cast<int>(l.model->goals.size());
      }
      for (const auto& d : l.diagnostics) {
        info.errors += d.severity == syntax::Severity::Error;
        info.warnings += d.severity == syntax::Severity::Warning;
      }
    } catch (const Error&) {
      info.errors = 1;
    }
    out.push_back(std::move(info));
  }
  std::sort(out.begin(), out.end(), [](const ProtocolInfo& a, const ProtocolInfo& b) { return a.path < b.path; });
  return out;
}

std::vector<Diagnostic> Workbench::check(const fs::path& path) const { return load(resolve(path)).diagnostics; }

fs::path Workbench::out_dir_for(const fs::path& source, const std::optional<fs::path>& requested) const {
  if (requested) return resolve(*requested);
  return source.parent_path() / "anbx-out";
}

fs::path Workbench::tool_executable(VerifyTool tool) const {
  std::lock_guard lock(mu_);
  std::optional<fs::path> p;
  switch (tool) {
    case VerifyTool::Ofmc: p = config_.ofmc_path; break;
    case VerifyTool::ProVerif: p = config_.proverif_path; break;
    case VerifyTool::Mock: p = config_.mock_path ? config_.mock_path : find_mock_binary(); break;
  }
  if (!p) throw Error("E-CONFIG", to_string(tool) + " is not configured");
  return adapters::resolve_executable(*p);
}

fs::path Workbench::anbxc() const {
  std::lock_guard lock(mu_);
  if (!config_.anbxc_path) throw Error("E-CONFIG", "the AnBx compiler is not configured");
  return adapters::resolve_executable(*config_.anbxc_path);
}

void Workbench::add_tool_env(PipelineStep& step, VerifyTool tool) const {
  if (tool != VerifyTool::Mock) return;
  std::optional<std::string> script;
  {
    std::lock_guard lock(mu_);
    if (config_.mock_script) script = resolve(*config_.mock_script).string();
  }
  if (!script) return;
  std::function<void(PipelineStep&)> set = [&](PipelineStep& s) {
    s.task.plan.env["ANBX_MOCK_SCRIPT"] = *script;
    for (auto& c : s.then) set(c);
  };
  set(step);
}

JobReport Workbench::compile(const CompileRequest& request) {
  JobReport report;
  const fs::path source = resolve(request.path);
  Loaded l = load(source);
  const fs::path out = out_dir_for(source, request.out_dir);

  if (request.target == CompileTarget::AnB) {
    auto anb = as_anb(l);
    report.diagnostics = l.diagnostics;
    if (!anb) return report;
    if (request.single_goals) {
      report.files = write_split(*anb, out, report.diagnostics);
    } else {
      report.files.push_back(write_one(*anb, out));
    }
    return report;
  }

  report.diagnostics = l.diagnostics;
  if (!l.model || syntax::has_errors(l.diagnostics)) return report;
  const fs::path compiler = anbxc();
  std::vector<fs::path> inputs{source};
  if (request.single_goals) inputs = write_split(*l.model, out, report.diagnostics);
  if (!report.ok()) return report;
  scheduler::SubmitOptions opts;
  if (request.new_console) opts.console = scheduler_->new_console();
  for (const auto& in : inputs) {
    TaskSpec s;
    s.kind = TaskKind::Compile;
    s.tool = Tool::Anbxc;
    s.plan = adapters::build_anbxc_invocation(compiler, in, adapters::ExportTarget::ProVerif);
    auto key = results::result_key(in.stem().string(), std::nullopt);
    s.protocol = key.first;
    s.export_option = "PV";
    report.tasks.push_back(scheduler_->submit(s, opts));
    report.files.push_back(pv_output_for(in));
  }
  return report;
}

JobReport Workbench::verify(const VerifyRequest& request) {
  if (request.sessions < 1) throw Error("E-BADN", "sessions must be at least 1");
  if (request.one_session_first && request.sessions < 2)
    throw Error("E-BADN", "one-session-first needs at least 2 sessions");
  JobReport report;
  const fs::path source = resolve(request.path);
  const fs::path out = out_dir_for(source, request.out_dir);
  const fs::path exe = tool_executable(request.tool);
  std::optional<fs::path> theory;
  if (request.theory) theory = resolve(*request.theory);

  std::vector<PipelineStep> roots;
  if (request.tool == VerifyTool::ProVerif) {
    if (source.extension() == ".pv") {
      if (request.single_goals) throw Error("E-CONFIG", "single-goal runs need an AnB or AnBx source");
      PipelineStep step;
      step.task.kind = TaskKind::ProVerif;
      step.task.tool = Tool::ProVerif;
      step.task.plan = adapters::build_proverif_invocation(exe, source, adapters::ProVerifMode::Solve);
      step.task.protocol = source.stem().string();
      roots.push_back(step);
      report.files.push_back(source);
    } else {
      Loaded l = load(source);
      report.diagnostics = l.diagnostics;
      if (!l.model || !report.ok()) return report;
      const fs::path compiler = anbxc();
      std::vector<fs::path> inputs{source};
      if (request.single_goals) inputs = write_split(*l.model, out, report.diagnostics);
      if (!report.ok()) return report;
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        PipelineStep step;
        step.task.kind = TaskKind::Compile;
        step.task.tool = Tool::Anbxc;
        step.task.plan = adapters::build_anbxc_invocation(compiler, inputs[i], adapters::ExportTarget::ProVerif);
        step.task.export_option = "PV";
        PipelineStep pv;
        pv.condition = Condition::OnSuccessExit;
        pv.task.kind = TaskKind::ProVerif;
        pv.task.tool = Tool::ProVerif;
        pv.task.plan = adapters::build_proverif_invocation(exe, pv_output_for(inputs[i]), adapters::ProVerifMode::Solve);
        step.then.push_back(pv);
        label_tree(step, l.model->name.name, request.single_goals ? std::optional(goal_label(i)) : std::nullopt);
        roots.push_back(step);
        report.files.push_back(pv_output_for(inputs[i]));
      }
    }
  } else {
    Loaded l = load(source);
    auto anb = as_anb(l);
    report.diagnostics = l.diagnostics;
    if (!anb) return report;
    std::vector<fs::path> inputs;
    if (request.single_goals) {
      inputs = write_split(*anb, out, report.diagnostics);
      if (!report.ok()) return report;
    } else if (l.model->dialect == syntax::Dialect::AnB) {
      inputs.push_back(source);
    } else {
      inputs.push_back(write_one(*anb, out));
    }
    const std::string name = l.model->name.name;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      std::optional<std::string> goal = request.single_goals ? std::optional(goal_label(i)) : std::nullopt;
      fs::path target = inputs[i];
      std::optional<PipelineStep> if_step;
      if (request.via_if) {
        auto plans =
            adapters::build_ofmc_invocation(exe, inputs[i], adapters::OfmcOptions{request.sessions, true, theory});
        if_step.emplace();
        if_step->task.kind = TaskKind::Compile;
        if_step->task.tool = Tool::Generic;
        if_step->task.plan = plans.front();
        if_step->task.export_option = "IF";
        target = plans.back().args.front();
      }
      PipelineStep verify;
      if (request.one_session_first) {
        verify.task = ofmc_spec(exe, target, 1, name, goal, theory);
        PipelineStep more;
        more.condition = Condition::OnSafe;
        more.task = ofmc_spec(exe, target, request.sessions, name, goal, theory);
        verify.then.push_back(more);
      } else {
        verify.task = ofmc_spec(exe, target, request.sessions, name, goal, theory);
      }
      PipelineStep root = verify;
      if (if_step) {
        verify.condition = Condition::OnSuccessExit;
        if_step->then.push_back(verify);
        root = *if_step;
      }
      label_tree(root, name, goal);
      roots.push_back(root);
      report.files.push_back(inputs[i]);
    }
  }

  scheduler::SubmitOptions opts;
  if (request.new_console) opts.console = scheduler_->new_console();
  for (auto& root : roots) {
    add_tool_env(root, request.tool);
    report.tasks.push_back(scheduler_->submit_pipeline(root, opts));
  }
  return report;
}

scheduler::TaskId Workbench::reconstruct(const fs::path& path, bool new_console) {
  const fs::path source = resolve(path);
  auto pipeline = adapters::plan_attack_reconstruction(anbxc(), tool_executable(VerifyTool::Ofmc), source);
  label_tree(pipeline, source.stem().string(), std::nullopt);
  pipeline.task.export_option = "AnB";
  scheduler::SubmitOptions opts;
  if (new_console) opts.console = scheduler_->new_console();
  return scheduler_->submit_pipeline(pipeline, opts);
}

std::vector<results::BenchRow> Workbench::bench(const std::vector<fs::path>& corpus, VerifyTool tool, int repetitions,
                                                int sessions, std::optional<int> max_parallel,
                                                const std::optional<fs::path>& out_dir) {
  if (sessions < 1) throw Error("E-BADN", "sessions must be at least 1");
  const fs::path exe = tool_executable(tool);
  std::vector<results::BenchJob> jobs;
  std::vector<results::BenchRow> failed;
  for (const auto& entry : corpus) {
    const fs::path source = resolve(entry);
    const fs::path out = out_dir_for(source, out_dir);
    Loaded l = load(source);
    results::BenchJob job;
    job.protocol = l.model ? l.model->name.name : source.stem().string();

    if (tool == VerifyTool::ProVerif) {
      if (!l.model || syntax::has_errors(l.diagnostics)) {
        failed.push_back(results::BenchRow{job.protocol, 0, 0, 0, 0, std::nullopt, "invalid model"});
        continue;
      }
      std::vector<Diagnostic> diags;
      std::vector<fs::path> inputs{source};
      auto goals = write_split(*l.model, out, diags);
      inputs.insert(inputs.end(), goals.begin(), goals.end());
      const fs::path compiler = anbxc();
      std::vector<scheduler::TaskId> compiles;
      for (const auto& in : inputs) {
        TaskSpec s;
        s.kind = TaskKind::Compile;
        s.tool = Tool::Anbxc;
        s.plan = adapters::build_anbxc_invocation(compiler, in, adapters::ExportTarget::ProVerif);
        compiles.push_back(scheduler_->submit(s));
      }
      bool compiled = true;
      for (auto id : compiles) {
        scheduler_->wait(id);
        auto r = scheduler_->result(id)->row;
        compiled &= r.state == scheduler::TaskState::Finished && r.exit_code == 0;
      }
      if (!compiled) {
        failed.push_back(results::BenchRow{job.protocol, 0, 0, 0, 0, std::nullopt, "export failed"});
        continue;
      }
      auto pv_spec = [&](const fs::path& in, const std::optional<std::string>& goal) {
        TaskSpec s;
        s.kind = TaskKind::ProVerif;
        s.tool = Tool::ProVerif;
        s.plan = adapters::build_proverif_invocation(exe, pv_output_for(in), adapters::ProVerifMode::Solve);
        s.protocol = job.protocol;
        s.goal = goal;
        return s;
      };
      job.all_goals = pv_spec(inputs[0], std::nullopt);
      for (std::size_t i = 1; i < inputs.size(); ++i) job.single_goals.push_back(pv_spec(inputs[i], goal_label(i - 1)));
    } else {
      auto anb = as_anb(l);
      if (!anb) {
        failed.push_back(results::BenchRow{job.protocol, 0, 0, 0, 0, std::nullopt, "invalid model"});
        continue;
      }
      std::vector<Diagnostic> diags;
      fs::path all = l.model->dialect == syntax::Dialect::AnB ? source : write_one(*anb, out);
      auto goals = write_split(*anb, out, diags);
      job.all_goals = ofmc_spec(exe, all, sessions, job.protocol, std::nullopt, std::nullopt);
      for (std::size_t i = 0; i < goals.size(); ++i)
        job.single_goals.push_back(ofmc_spec(exe, goals[i], sessions, job.protocol, goal_label(i), std::nullopt));
      auto with_env = [&](TaskSpec& spec) {
        PipelineStep step{spec, Condition::Always, false, {}};
        add_tool_env(step, tool);
        spec = step.task;
      };
      with_env(job.all_goals);
      for (auto& spec : job.single_goals) with_env(spec);
    }
    jobs.push_back(std::move(job));
  }
  results::BenchOptions options;
  options.repetitions = repetitions;
  options.max_parallel = max_parallel.value_or(scheduler_->max_parallel());
  options.executor = executor_;
  auto rows = results::bench_run(jobs, options);
  rows.insert(rows.end(), failed.begin(), failed.end());
  return rows;
}

WorkbenchConfig Workbench::config() const {
  std::lock_guard lock(mu_);
  return config_;
}

std::vector<ConfigIssue> Workbench::set_config(const WorkbenchConfig& config) {
  auto issues = validate_config(config);
  if (!issues.empty()) return issues;
  {
    std::lock_guard lock(mu_);
    config_ = config;
  }
  scheduler_->set_max_parallel(config.max_parallel > 0 ? config.max_parallel : scheduler::default_max_parallel());
  scheduler_->set_timeout_minutes(config.timeout_minutes);
  if (config_path_) save_config(config, *config_path_);
  return issues;
}

}  // namespace anbx::service
