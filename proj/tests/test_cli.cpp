#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "phantom/materials.hpp"

namespace {

std::string run_cli(const std::string& args, int* exit_code = nullptr,
                    const std::string& env = "") {
    const std::string cmd = env + " " + std::string(PHANTOM_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    if (exit_code) *exit_code = WEXITSTATUS(status);
    return out;
}

const std::string kData = PHANTOM_DATA_DIR;
const std::string kCommon = "--db " + kData + "/reference_db --tissues " + kData + "/tissues.json";

}  // namespace

TEST_CASE("tissues default run: 201 data rows, all six tissues in the header") {
    std::string out = run_cli("tissues");
    std::size_t rows = 0;
    std::istringstream in(out);
    std::string line;
    std::getline(in, line);
    for (const char* name : {"skin_dry", "skin_wet", "muscle", "fat", "cortical_bone",
                             "bone_marrow"})
        CHECK(line.find(name) != std::string::npos);
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 201);
}

TEST_CASE("single-tissue CSV round-trips through the ingestion parser") {
    std::string out = run_cli("tissues --tissue muscle");
    std::istringstream in(out);
    phantom::IngestMetadata meta;
    meta.provenance = phantom::Provenance::synthetic;
    phantom::MaterialSample s =
        phantom::ingest_measurement(in, phantom::Method::oil_only, 0.50, meta);
    CHECK(s.spectrum.grid.size() == 201);
}

TEST_CASE("match output names the expected top candidate") {
    std::string out =
        run_cli(kCommon + " match --tissue fat --property conductivity --band 11:100 --top 1");
    CHECK(out.find("80% oil_kerosene") != std::string::npos);
}

TEST_CASE("tighter thresholds produce bands inside the looser ones") {
    std::string loose = run_cli(kCommon + " match --table --format csv");
    std::string tight = run_cli(kCommon + " --threshold 0.05 match --table --format csv");
    // every tight row's band must lie inside some loose row's band for the
    // same tissue/property/sample
    std::istringstream tin(tight);
    std::string line;
    std::getline(tin, line);  // header
    while (std::getline(tin, line)) {
        std::istringstream ls(line);
        std::string tissue, prop, method, conc, fmin_s, fmax_s, err;
        std::getline(ls, tissue, ',');
        std::getline(ls, prop, ',');
        std::getline(ls, method, ',');
        std::getline(ls, conc, ',');
        std::getline(ls, fmin_s, ',');
        std::getline(ls, fmax_s, ',');
        std::getline(ls, err, ',');
        const double fmin = std::stod(fmin_s), fmax = std::stod(fmax_s);
        bool contained = false;
        std::istringstream lin(loose);
        std::string l2;
        std::getline(lin, l2);
        while (std::getline(lin, l2)) {
            std::istringstream l2s(l2);
            std::string t2, p2, m2, c2, lo2, hi2, e2;
            std::getline(l2s, t2, ',');
            std::getline(l2s, p2, ',');
            std::getline(l2s, m2, ',');
            std::getline(l2s, c2, ',');
            std::getline(l2s, lo2, ',');
            std::getline(l2s, hi2, ',');
            if (t2 == tissue && p2 == prop && m2 == method && c2 == conc &&
                std::stod(lo2) <= fmin * 1.001 && std::stod(hi2) >= fmax * 0.999)
                contained = true;
        }
        INFO("tight band " << line);
        CHECK(contained);
    }
}

TEST_CASE("interpolated recipe carries the warning banner; tabulated does not") {
    std::string interp = run_cli("recipe --method oil_only --concentration 45");
    CHECK(interp.find("not validated") != std::string::npos);
    std::string exact = run_cli("recipe --method oil_only --concentration 50");
    CHECK(exact.find("not validated") == std::string::npos);
    CHECK(exact.find("175 parts") != std::string::npos);
}

TEST_CASE("recipe --factor scales amounts") {
    std::string out = run_cli("recipe --method oil_only --concentration 50 --factor 2");
    CHECK(out.find("350 parts") != std::string::npos);   // safflower oil doubled
    CHECK(out.find("53.9 parts") != std::string::npos);  // gelatin doubled
}

TEST_CASE("environment variables and the config file participate in precedence") {
    // env var supplies the db; flag absent
    std::string out = run_cli("match --tissue fat --property conductivity --band 11:100 --top 1",
                              nullptr,
                              "PHANTOM_DB=" + kData + "/reference_db PHANTOM_TISSUES=" + kData +
                                  "/tissues.json");
    CHECK(out.find("80% oil_kerosene") != std::string::npos);

    // config file in the db dir sets the format; flags still win over it
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "phantom_cli_cfg";
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (const auto& entry : fs::directory_iterator(kData + "/reference_db"))
        fs::copy(entry.path(), dir / entry.path().filename());
    std::ofstream(dir / "config.json") << R"({"format": "csv", "tissue_library": ")" +
                                              kData + R"(/tissues.json"})";
    std::string csv = run_cli("--db " + dir.string() +
                              " match --tissue fat --property conductivity --band 11:100");
    CHECK(csv.rfind("method,", 0) == 0);  // csv came from the config file
    std::string md = run_cli("--db " + dir.string() +
                             " --format markdown match --tissue fat --property conductivity "
                             "--band 11:100");
    CHECK(md.rfind("| Rank", 0) == 0);    // flag overrides config
    fs::remove_all(dir);
}

TEST_CASE("exit code contract") {
    int code = -1;
    run_cli("tissues", &code);
    CHECK(code == 0);
    run_cli(kCommon + " stack --preset arm --property conductivity --band 30:100 --strict",
            &code);
    CHECK(code == 1);
    run_cli("recipe --method oil_only", &code);  // missing required option
    CHECK(code == 2);
    run_cli("tissues --tissue unknown_tissue", &code);
    CHECK(code == 2);
}
