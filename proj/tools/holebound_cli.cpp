// Command-line driver: check / generate / wr / oracle / replay.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <holebound/cli.hpp>

int main(int argc, char** argv) {
  using namespace holebound::cli;

  CLI::App app{
      "holebound -- reachability with a bounded number of open holes for\n"
      "multi-stack pushdown systems, optionally with clocks and aged stacks.\n"
      "Exit codes: 0 nonempty/success, 1 empty/rejected, 2 error, 3 budget."};
  app.require_subcommand(1);

  CheckRequest checkReq;
  CLI::App* check = app.add_subcommand(
      "check", "Decide emptiness up to a hole budget and emit a witness");
  check->add_option("model", checkReq.modelPath, "Model file")->required();
  check->add_option("--max-holes", checkReq.maxHoles,
                    "Largest number of simultaneously open holes to try (default 2)");
  check->add_flag("--allow-large-k", checkReq.allowLargeK,
                  "Permit --max-holes above 16");
  check->add_flag("--untimed", checkReq.forceUntimed,
                  "Ignore clocks, guards and ages; analyze the untimed structure");
  check->add_option("--witness", checkReq.witnessPath,
                    "Write the accepting run here ('-' for stdout)");
  check->add_option("--stats", checkReq.statsPath,
                    "Write per-stage search statistics (JSON lines) here");
  check->add_option("--node-cap", checkReq.nodeCap,
                    "Cap on stored summaries per stage (default: size-derived)");

  std::string genSpec, genOut;
  CLI::App* generate =
      app.add_subcommand("generate", "Write a benchmark model file");
  generate->add_option("name", genSpec,
                       "Benchmark name, e.g. lbh, maze-timed, prodcons(3,2)")
      ->required();
  generate->add_option("-o,--output", genOut, "Output path (default: stdout)");

  std::string wrModel;
  CLI::App* wr = app.add_subcommand(
      "wr", "Dump the well-nested endpoint relation, one pair per line");
  wr->add_option("model", wrModel, "Model file")->required();

  OracleRequest oracleReq;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Exhaustively search bounded runs (ground truth for small models)");
  oracle->add_option("model", oracleReq.modelPath, "Model file")->required();
  oracle->add_option("--depth", oracleReq.depth,
                     "Largest number of transitions to try (default 12)");
  oracle->add_option("--max-elapse", oracleReq.maxElapse,
                     "Largest single time elapse to try (default 8)");
  oracle->add_option("--max-total-elapse", oracleReq.maxTotalElapse,
                     "Cap on the summed elapse of a run (default: unlimited)");
  oracle->add_option("--node-cap", oracleReq.nodeCap,
                     "Cap on explored configurations (default 200000)");
  oracle->add_option("--witness", oracleReq.witnessPath,
                     "Write the found run here");

  std::string replayModel, replayWitness;
  CLI::App* rep = app.add_subcommand(
      "replay", "Re-execute a witness file against a model");
  rep->add_option("model", replayModel, "Model file")->required();
  rep->add_option("witness", replayWitness, "Witness file")->required();

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(check))
    return cmd_check(checkReq, std::cout, std::cerr);
  if (app.got_subcommand(generate))
    return cmd_generate(genSpec, genOut, std::cout, std::cerr);
  if (app.got_subcommand(wr)) return cmd_wr(wrModel, std::cout, std::cerr);
  if (app.got_subcommand(oracle))
    return cmd_oracle(oracleReq, std::cout, std::cerr);
  if (app.got_subcommand(rep))
    return cmd_replay(replayModel, replayWitness, std::cout, std::cerr);
  return kExitError;
}
