#pragma once

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "loadcoint/calendar.hpp"
#include "loadcoint/ingest.hpp"
#include "loadcoint/synth.hpp"

namespace loadcoint::testing {

inline Date ymd(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

/// Records for days target-9..target; load(offset, hour) and temp(offset, hour).
inline std::vector<Record> window_records(Date target, const std::function<double(int, int)>& load,
                                          const std::function<double(int, int)>& temp) {
  std::vector<Record> out;
  for (int off = -kHistoryDays; off <= 0; ++off)
    for (int h = 1; h <= kHours; ++h) {
      Record r{add_days(target, off), h, std::nullopt, temp(off, h)};
      if (off < 0) r.load_mw = load(off, h);
      out.push_back(r);
    }
  return out;
}

inline SeriesWindow make_window(Date target, const std::function<double(int, int)>& load,
                                const std::function<double(int, int)>& temp) {
  return assemble_window(window_records(target, load, temp), target);
}

/// Nine identical history days of a double-peaked shape, flat temperature.
inline SeriesWindow identical_days_window(Date target, double temp_c = 10.0) {
  return make_window(
      target, [](int, int h) { return 4000.0 + 800.0 * peak_shape(h); }, [=](int, int) { return temp_c; });
}

inline HourValues random_profile(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  HourValues v{};
  for (double& x : v) x = u(rng);
  return v;
}

class TempDir {
public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("loadcoint_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs `cmd` through the shell, capturing both streams into files.
inline CommandResult run_command(const std::string& cmd, const TempDir& dir) {
  const std::string out = dir.file("stdout.txt");
  const std::string err = dir.file("stderr.txt");
  const int status = std::system((cmd + " >" + out + " 2>" + err).c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

}  // namespace loadcoint::testing
