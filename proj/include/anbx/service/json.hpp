#pragma once

#include <json.hpp>

#include "anbx/results/bench.hpp"
#include "anbx/results/tree.hpp"
#include "anbx/scheduler/scheduler.hpp"
#include "anbx/service/config.hpp"
#include "anbx/service/workbench.hpp"
#include "anbx/syntax/source.hpp"

namespace anbx::service {

using Json = nlohmann::ordered_json;

Json to_json(const syntax::Diagnostic& d);
Json to_json(const std::vector<syntax::Diagnostic>& ds);
Json to_json(const scheduler::TaskRow& r);
Json to_json(const scheduler::Event& e);
Json to_json(const scheduler::ConsoleChunk& c);
Json to_json(const results::GoalResult& g);
Json to_json(const std::vector<results::ProtocolResults>& view);
Json to_json(const results::BenchRow& r);
Json to_json(const WorkbenchConfig& c);
Json to_json(const ConfigIssue& i);
Json to_json(const ProtocolInfo& p);
Json to_json(const JobReport& r);
Json to_json(const adapters::OutcomeClass& o);

/// Missing fields keep their defaults. Errors: E-CONFIG on wrong types.
WorkbenchConfig config_from_json(const Json& j, WorkbenchConfig base = {});
VerifyRequest verify_request_from_json(const Json& j);
CompileRequest compile_request_from_json(const Json& j);

}  // namespace anbx::service
