#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_cli(const std::string& args) {
    const std::string command = std::string(QGAN_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 512> buffer{};
    CommandResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
        result.output += buffer.data();
    }
    const int status = pclose(pipe);
    result.exit_code = WEXITSTATUS(status);
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("fit-init --help").exit_code == 0);
    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("fit-init --target nonsense").exit_code == 2);
    CHECK(run_cli("reproduce --scale nonsense").exit_code == 2);
}

TEST_CASE("fit-init on the uniform target") {
    const CommandResult result = run_cli("fit-init --target uniform --qubits 3");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("0.50pi 0.50pi 0.50pi") != std::string::npos);
    CHECK(result.output.find("permutation:  0 1 2 3 4 5 6 7") != std::string::npos);
}

TEST_CASE("fit-init log-normal matches the published angles under truncation") {
    const CommandResult result = run_cli(
        "fit-init --target lognormal --mu 1 --sigma 1 --qubits 3 "
        "--tail-mode truncate_renormalize");
    CHECK(result.exit_code == 0);
    // 0.32pi 0.40pi 0.47pi, each within 0.05pi of the published vector
    CHECK(result.output.find("0.32pi 0.40pi 0.47pi") != std::string::npos);
}

TEST_CASE("fit-init custom pmf from file") {
    const fs::path dir = fs::temp_directory_path() / "qgan_cli_test";
    fs::create_directories(dir);
    const fs::path pmf_path = dir / "custom.json";
    std::ofstream(pmf_path) << "[0.4, 0.3, 0.2, 0.1]";

    const fs::path out_path = dir / "spec.json";
    const CommandResult result = run_cli("fit-init --target custom --pmf-file " +
                                         pmf_path.string() + " --out " + out_path.string());
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("0.37pi 0.45pi") != std::string::npos);

    const auto doc = nlohmann::json::parse(slurp(out_path));
    CHECK(doc.at("angles").size() == 2);
    CHECK(std::abs(doc.at("angles")[0].get<double>() - 1.1593) < 1e-3);
    CHECK(std::abs(doc.at("angles")[1].get<double>() - 1.4274) < 1e-3);
    fs::remove_all(dir);
}

TEST_CASE("train writes reproducible artifacts") {
    const fs::path dir = fs::temp_directory_path() / "qgan_cli_train";
    fs::remove_all(dir);

    const std::string common =
        "train --target lognormal --qubits 3 --k 1 --epochs 2 --runs 1 --seed 99 "
        "--grad-mode exact --plots --out ";
    const CommandResult first = run_cli(common + (dir / "a").string());
    CHECK(first.exit_code == 0);
    CHECK(fs::exists(dir / "a" / "run_0.csv"));
    CHECK(fs::exists(dir / "a" / "run_0.json"));
    CHECK(fs::exists(dir / "a" / "run_0_pmf.svg"));
    CHECK(fs::exists(dir / "a" / "run_0_entropy.svg"));
    CHECK(fs::exists(dir / "a" / "summary.csv"));

    const CommandResult second = run_cli(common + (dir / "b").string());
    CHECK(second.exit_code == 0);
    CHECK(slurp(dir / "a" / "run_0.csv") == slurp(dir / "b" / "run_0.csv"));

    // the sidecar feeds back as a config and reproduces the run
    const auto sidecar = nlohmann::json::parse(slurp(dir / "a" / "run_0.json"));
    const fs::path config_path = dir / "config.json";
    std::ofstream(config_path) << sidecar.at("config").dump();
    const CommandResult third =
        run_cli("train --config " + config_path.string() + " --out " + (dir / "c").string());
    CHECK(third.exit_code == 0);
    CHECK(slurp(dir / "a" / "run_0.csv") == slurp(dir / "c" / "run_0.csv"));

    const std::string csv = slurp(dir / "a" / "run_0.csv");
    CHECK(csv.rfind("epoch,loss_g,loss_d,rel_entropy", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("config file can carry the output directory and plot toggle") {
    const fs::path dir = fs::temp_directory_path() / "qgan_cli_cfgout";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path config_path = dir / "config.json";
    std::ofstream(config_path) << nlohmann::json{
        {"target", {{"kind", "lognormal"}, {"mu", 1.0}, {"sigma", 1.0}, {"grid_points", 8}}},
        {"epochs", 1},
        {"runs", 1},
        {"grad_mode", "exact"},
        {"output_dir", (dir / "from_config").string()},
        {"plots", true}}.dump();
    const CommandResult result = run_cli("train --config " + config_path.string());
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(dir / "from_config" / "run_0.csv"));
    CHECK(fs::exists(dir / "from_config" / "run_0_pmf.svg"));
    fs::remove_all(dir);
}

TEST_CASE("train reports bad configs as usage-independent failures") {
    const fs::path dir = fs::temp_directory_path() / "qgan_cli_badcfg";
    fs::create_directories(dir);
    const fs::path config_path = dir / "bad.json";
    std::ofstream(config_path) << R"({"unknown_knob": 1})";
    const CommandResult result =
        run_cli("train --config " + config_path.string() + " --out " + dir.string());
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("unknown config key") != std::string::npos);
    fs::remove_all(dir);
}

} // TEST_SUITE
