#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const char* cli = QCBEL_CLI_PATH;

int run(const std::string& args, std::string* out = nullptr) {
    std::string cmd = std::string(cli) + " " + args + " > cli_out.txt 2>&1";
    int rc = std::system(cmd.c_str());
    if (out) {
        std::ifstream in("cli_out.txt");
        std::stringstream ss;
        ss << in.rdbuf();
        *out = ss.str();
    }
    fs::remove("cli_out.txt");
    return WEXITSTATUS(rc);
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path);
    f << body;
}

// file contents with any line starting with the given prefix dropped
std::string strip_lines(const fs::path& p, const std::string& prefix) {
    std::ifstream in(p);
    std::string line, out;
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) != 0) out += line + "\n";
    return out;
}

}  // namespace

TEST_CASE("scenario listing") {
    std::string out;
    CHECK(run("list", &out) == 0);
    int lines = 0;
    for (char c : out) lines += c == '\n';
    CHECK(lines >= 10);
    CHECK(out.find("grotzsch") != std::string::npos);
    CHECK(out.find("dirichlet-constant-mu") != std::string::npos);

    std::string filtered;
    CHECK(run("list dirichlet", &filtered) == 0);
    CHECK(filtered.find("dirichlet") != std::string::npos);
    CHECK(filtered.find("grotzsch") == std::string::npos);
}

TEST_CASE("config validation exit codes") {
    write_file("ok.ini",
               "[scenario]\nname = grotzsch\n[params]\nouter = 1.0\n");
    std::string out;
    CHECK(run("validate ok.ini", &out) == 0);
    CHECK(out.find("ok") != std::string::npos);

    write_file("unknown_key.ini",
               "[scenario]\nname = grotzsch\n[params]\nbogus = 1.0\n");
    CHECK(run("validate unknown_key.ini", &out) == 2);
    CHECK(out.find("bogus") != std::string::npos);

    write_file("unknown_scenario.ini", "[scenario]\nname = no-such\n");
    CHECK(run("validate unknown_scenario.ini", &out) == 2);

    write_file("malformed.ini", "[scenario\nname = grotzsch\n");
    CHECK(run("validate malformed.ini", &out) == 2);

    write_file("bad_type.ini",
               "[scenario]\nname = grotzsch\n[params]\nouter = banana\n");
    CHECK(run("validate bad_type.ini", &out) == 2);

    write_file("bad_res.ini",
               "[scenario]\nname = grotzsch\n[grid]\nresolution = 4\n");
    CHECK(run("validate bad_res.ini", &out) == 2);

    CHECK(run("validate does_not_exist.ini", &out) == 2);

    for (const char* f :
         {"ok.ini", "unknown_key.ini", "unknown_scenario.ini",
          "malformed.ini", "bad_type.ini", "bad_res.ini"})
        fs::remove(f);
}

TEST_CASE("run writes csv, schema and manifest; reruns are byte-identical") {
    fs::remove_all("cli_out_a");
    fs::remove_all("cli_out_b");
    write_file("run.ini",
               "[scenario]\nname = grotzsch\n"
               "[params]\nouter = 2.0\n"
               "[output]\ndir = cli_out_a\n");
    CHECK(run("run run.ini") == 0);
    fs::path dir = "cli_out_a/grotzsch";
    REQUIRE(fs::exists(dir / "grotzsch.csv"));
    REQUIRE(fs::exists(dir / "SCHEMA.txt"));
    REQUIRE(fs::exists(dir / "manifest.txt"));

    // header plus the sweep rows
    std::ifstream csv(dir / "grotzsch.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "inner,outer,lower_bound");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == 8);

    // second run into a different root via the environment override
    std::string cmd = std::string("QCBEL_OUTPUT_ROOT=cli_out_b ") + cli +
                      " run run.ini > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    fs::path dir2 = "cli_out_b/grotzsch";
    REQUIRE(fs::exists(dir2 / "grotzsch.csv"));

    auto bytes = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CHECK(bytes(dir / "grotzsch.csv") == bytes(dir2 / "grotzsch.csv"));
    CHECK(bytes(dir / "SCHEMA.txt") == bytes(dir2 / "SCHEMA.txt"));
    // the manifest differs only in its timestamp line
    CHECK(strip_lines(dir / "manifest.txt", "timestamp:") ==
          strip_lines(dir2 / "manifest.txt", "timestamp:"));

    fs::remove("run.ini");
    fs::remove_all("cli_out_a");
    fs::remove_all("cli_out_b");
}

TEST_CASE("numerical failures exit with code 3") {
    // beltrami solver with |c| >= 1 violates ellipticity at every node
    std::string out;
    write_file("bad_mu.ini",
               "[scenario]\nname = beltrami-constant-mu\n"
               "[params]\nc = 1.5\n"
               "[grid]\nresolution = 64\n"
               "[output]\ndir = cli_out_c\n");
    CHECK(run("run bad_mu.ini", &out) == 3);
    fs::remove("bad_mu.ini");
    fs::remove_all("cli_out_c");
}
