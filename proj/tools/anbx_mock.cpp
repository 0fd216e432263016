// Stand-in for OFMC/ProVerif in tests and demos. See anbx/adapters/mock.hpp
// for the script format. It accepts real verifier command lines, so the
// script comes from --script or ANBX_MOCK_SCRIPT.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "anbx/adapters/mock.hpp"
#include "anbx/error.hpp"

int main(int argc, char** argv) {
  using namespace anbx::adapters;
  try {
    auto args = parse_mock_args(std::vector<std::string>(argv + 1, argv + argc));
    MockScript script;
    if (args.script) {
      script = MockScript::load(*args.script);
    } else if (const char* env = std::getenv("ANBX_MOCK_SCRIPT"); env && *env) {
      script = MockScript::load(env);
    }
    script = apply_mock_args(script, args);
    if (script.ignore_term) std::signal(SIGTERM, SIG_IGN);
    auto run = plan_mock_run(script, args.input, args.goal);
    std::cout << "mock: verifying " << args.input << std::endl;
    if (run.delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(run.delay_ms));
    std::cout << run.output << std::flush;
    return run.exit_code;
  } catch (const anbx::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
