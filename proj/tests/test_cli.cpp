#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the arena binary: exit codes and byte-stable reports.

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(ARENA_CLI_PATH) + " " + args +
                      " > /dev/null 2> /dev/null";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("cli: clean run exits 0") {
    CHECK(run_cli("run --algo trivial --n 4 --sched round-robin:40") == 0);
}

TEST_CASE("cli: unknown algorithm exits 2") {
    CHECK(run_cli("run --algo nope --n 4 --sched round-robin:40") == 2);
}

TEST_CASE("cli: random schedule without a seed exits 2") {
    CHECK(run_cli("run --algo trivial --n 4 --sched random:100") == 2);
}

TEST_CASE("cli: lowerbound with zero phases exits 0") {
    CHECK(run_cli("lowerbound --algo trivial --n 8 --m 2 --phases 0") == 0);
}

TEST_CASE("cli: lowerbound with m = n-1 surfaces the infeasibility") {
    CHECK(run_cli("lowerbound --algo trivial --n 8 --m 7 --phases 1") == 2);
}

TEST_CASE("cli: compose smoke run") {
    CHECK(run_cli("compose --upper rounds --lower coop --n 3 "
                  "--corpus random:3:len=300:seed=5") == 0);
    CHECK(run_cli("compose --upper nope --lower coop --n 3 "
                  "--corpus random:2:len=100:seed=5") == 2);
}

TEST_CASE("cli: reports are byte-identical across reruns") {
    namespace fs = std::filesystem;
    fs::path base = fs::temp_directory_path() / "arena_cli_det";
    fs::remove_all(base);
    for (const char* sub : {"a", "b"}) {
        std::string out = (base / sub).string();
        REQUIRE(run_cli("run --algo coop --n 8 --sched random:5000:seed=7 "
                        "--out " + out) == 0);
    }
    for (const char* file :
         {"trace.txt", "tasks.txt", "violations.txt", "metrics.csv",
          "metrics.json"}) {
        std::string a = slurp(base / "a" / file);
        std::string b = slurp(base / "b" / file);
        if (std::string(file) != "violations.txt") CHECK(!a.empty());
        CHECK(a == b);
    }
    fs::remove_all(base);
}
