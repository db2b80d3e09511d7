#ifndef ZOCOOP_CLI_HPP
#define ZOCOOP_CLI_HPP

namespace zocoop {

/// Command-line entry point: run, sweep, check, plot. Returns 0 on
/// success, 1 on configuration errors, 2 when a run aborted or a check
/// failed.
int cli_run(int argc, char** argv);

}  // namespace zocoop

#endif  // ZOCOOP_CLI_HPP
