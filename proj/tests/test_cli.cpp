// Copyright 2026 The circllhist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "circllhist/io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct result {
  int status = -1;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "circllhist_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

result run(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string command = std::string("'") + CIRCLLHIST_CLI + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int raw = std::system(command.c_str());
  result r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string path(const std::string& name) { return "'" + (work_dir() / name).string() + "'"; }

void write(const std::string& name, const std::string& content) { std::ofstream(work_dir() / name, std::ios::binary) << content; }

std::vector<std::string> batch_files(const std::string& dir, bool reversed = false) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(work_dir() / dir)) files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (reversed) std::reverse(files.begin(), files.end());
  return files;
}

std::string joined(const std::vector<std::string>& files) {
  std::string out;
  for (const auto& f : files) out += " '" + f + "'";
  return out;
}

// One line, machine-parsable code prefix.
void check_error_line(const result& r, const std::string& code) {
  static const std::regex pattern(R"(^error\[(usage|data|io|internal)\]: [^\n]+\n$)");
  CHECK(std::regex_match(r.err, pattern));
  CHECK(r.err.rfind("error[" + code + "]", 0) == 0);
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help").status == 0);
  CHECK(run("stats --help").status == 0);

  result r = run("");
  CHECK(r.status == 1);
  check_error_line(r, "usage");
  r = run("frobnicate");
  CHECK(r.status == 1);
  check_error_line(r, "usage");
  r = run("gen --out " + path("g") + " --bogus");
  CHECK(r.status == 1);
  check_error_line(r, "usage");
  r = run("gen --out " + path("g") + " --kind normal");
  CHECK(r.status == 1);
  check_error_line(r, "usage");
  r = run("gen --out " + path("g") + " --batches 0");
  CHECK(r.status == 1);
  check_error_line(r, "usage");
  r = run("stats " + path("missing.cllh"));
  CHECK(r.status == 1);
  check_error_line(r, "usage");
}

TEST_CASE("gen is deterministic and reports its samples") {
  result r = run("gen --kind uniform --seed 9 --batches 20 --batch-size 100 --out " + path("gen_a") + " --format json");
  REQUIRE(r.status == 0);
  const json report = json::parse(r.out);
  CHECK(report["samples"] == 2000);
  CHECK(report["batches"] == 20);
  CHECK(report["min"].get<double>() >= 10.0);
  CHECK(report["max"].get<double>() <= 100.0);
  REQUIRE(run("gen --kind uniform --seed 9 --batches 20 --batch-size 100 --out " + path("gen_b")).status == 0);
  const auto a = batch_files("gen_a");
  const auto b = batch_files("gen_b");
  REQUIRE(a.size() == 20);
  REQUIRE(b.size() == 20);
  for (size_t i = 0; i < a.size(); ++i) CHECK(slurp(a[i]) == slurp(b[i]));

  r = run("gen --kind simulated --seed 3 --batches 30 --out " + path("gen_sim") + " --format json");
  REQUIRE(r.status == 0);
  const json sim = json::parse(r.out);
  CHECK(sim["min"].get<double>() >= 1e-5);
  CHECK(sim["max"].get<double>() <= 1e10);
}

TEST_CASE("per-batch ingest and merge equals combined ingest") {
  REQUIRE(run("gen --kind simulated --seed 11 --batches 40 --batch-size 200 --out " + path("pipe")).status == 0);
  const auto files = batch_files("pipe");
  REQUIRE(run("ingest" + joined(files) + " --out " + path("pipe_hist")).status == 0);
  const auto hists = batch_files("pipe_hist");
  REQUIRE(hists.size() == files.size());
  REQUIRE(run("merge" + joined(hists) + " --out " + path("merged.cllh")).status == 0);
  REQUIRE(run("merge" + joined(batch_files("pipe_hist", true)) + " --out " + path("merged_rev.cllh")).status == 0);
  REQUIRE(run("ingest" + joined(files) + " --combine --out " + path("combined.cllh")).status == 0);

  const std::string merged = slurp(work_dir() / "merged.cllh");
  CHECK(merged == slurp(work_dir() / "merged_rev.cllh"));
  CHECK(merged == slurp(work_dir() / "combined.cllh"));

  const result s1 = run("stats " + path("merged.cllh") + " --format json");
  const result s2 = run("stats " + path("combined.cllh") + " --format json");
  REQUIRE(s1.status == 0);
  CHECK(s1.out == s2.out);

  // Single input re-encodes byte for byte.
  REQUIRE(run("merge " + path("merged.cllh") + " --out " + path("merged_again.cllh")).status == 0);
  CHECK(slurp(work_dir() / "merged_again.cllh") == merged);
}

TEST_CASE("stats report") {
  write("ten.txt", "10\n");
  REQUIRE(run("ingest " + path("ten.txt") + " --combine --out " + path("ten.cllh")).status == 0);
  result r = run("stats " + path("ten.cllh") + " --format json");
  REQUIRE(r.status == 0);
  const json doc = json::parse(r.out);
  std::vector<std::string> keys;
  for (const auto& item : doc.items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"count", "sum", "mean", "stddev", "moments", "quantiles", "bin_count", "serialized_bytes"});
  CHECK(doc["count"] == 1);
  CHECK(doc["mean"].get<double>() == 220.0 / 21.0);
  CHECK(doc["quantiles"].size() == 12);
  CHECK(doc["quantiles"][10]["q"].get<double>() == 0.99999);
  CHECK(doc["quantiles"][11]["q"].get<double>() == 1.0);
  CHECK(doc["bin_count"] == 1);
  CHECK(doc["serialized_bytes"] == 12);

  r = run("stats " + path("ten.cllh") + " --quantiles 0.5,0.9");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("count    1") != std::string::npos);
  CHECK(r.out.find("q 0.5\t10.5") != std::string::npos);

  r = run("stats " + path("ten.cllh") + " --quantiles 0.5,1.5");
  CHECK(r.status == 1);
  check_error_line(r, "usage");
  r = run("stats " + path("ten.cllh") + " --format xml");
  CHECK(r.status == 1);
  check_error_line(r, "usage");
}

TEST_CASE("stats on an empty histogram") {
  write("empty.txt", "# nothing\n");
  REQUIRE(run("ingest " + path("empty.txt") + " --combine --out " + path("empty.cllh")).status == 0);
  CHECK(slurp(work_dir() / "empty.cllh").size() == 9);
  result r = run("stats " + path("empty.cllh"));
  CHECK(r.status == 2);
  check_error_line(r, "data");
  r = run("stats " + path("empty.cllh") + " --quantiles '' --format json");
  REQUIRE(r.status == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["count"] == 0);
  CHECK(doc["mean"].is_null());
}

TEST_CASE("ingest reports rejects with a distinct exit code") {
  write("dirty.txt", "1.5\nabc\nNaN\n2.5\n");
  const result r = run("ingest " + path("dirty.txt") + " --combine --out " + path("dirty.cllh") + " --format json");
  CHECK(r.status == 2);
  check_error_line(r, "data");
  const json doc = json::parse(r.out);
  CHECK(doc["accepted"] == 2);
  CHECK(doc["rejected"] == 2);
  CHECK(doc["files"][0]["rejects"][0]["line"] == 2);
  CHECK(doc["files"][0]["rejects"][0]["text"] == "abc");
  CHECK(doc["files"][0]["rejects"][1]["line"] == 3);
  CHECK(circllhist::read_histogram_file(work_dir() / "dirty.cllh").total() == 2);

  write("clean.txt", "100\n");
  CHECK(run("ingest " + path("clean.txt") + " --combine --out " + path("clean.cllh")).status == 0);
}

TEST_CASE("ingest text form") {
  write("pair.txt", "4.2\n{\"v\": 4.25}\n");
  REQUIRE(run("ingest " + path("pair.txt") + " --combine --text-form --out " + path("pair.json")).status == 0);
  CHECK(slurp(work_dir() / "pair.json") == "[{\"v\":42,\"e\":0,\"c\":2}]\n");
  // Text-form histograms are accepted wherever binary ones are.
  REQUIRE(run("merge " + path("pair.json") + " --out " + path("pair.cllh")).status == 0);
  CHECK(circllhist::read_histogram_file(work_dir() / "pair.cllh").total() == 2);

  write("hundred.txt", [] {
    std::string s;
    for (int i = 0; i < 100; ++i) s += std::to_string(10 + i * 0.9) + "\n";
    return s;
  }());
  REQUIRE(run("ingest " + path("hundred.txt") + " --out " + path("hundred_dir")).status == 0);
  CHECK(circllhist::read_histogram_file(work_dir() / "hundred_dir" / "hundred.cllh").total() == 100);
}

TEST_CASE("merge rejects corrupt input and names the file") {
  write("good.txt", "10\n");
  REQUIRE(run("ingest " + path("good.txt") + " --combine --out " + path("good.cllh")).status == 0);
  write("corrupt.cllh", "CLLH\x01\x01");
  const result r = run("merge " + path("good.cllh") + " " + path("corrupt.cllh") + " --out " + path("never.cllh"));
  CHECK(r.status == 2);
  check_error_line(r, "data");
  CHECK(r.err.find("corrupt.cllh") != std::string::npos);
  CHECK(r.err.find("truncated") != std::string::npos);
  CHECK_FALSE(fs::exists(work_dir() / "never.cllh"));
}

TEST_CASE("count command") {
  write("lat.txt", "1.0\n1.05\n2.3\n1.52\n");
  REQUIRE(run("ingest " + path("lat.txt") + " --combine --out " + path("lat.cllh")).status == 0);
  result r = run("count " + path("lat.cllh") + " --threshold 1.5 --format json");
  REQUIRE(r.status == 0);
  json doc = json::parse(r.out);
  CHECK(doc["below"]["exact"] == true);
  CHECK(doc["below"]["estimate"] == 2);
  CHECK(doc["above"]["estimate"] == 2);
  CHECK(doc["total"] == 4);

  r = run("count " + path("lat.cllh") + " --threshold 1.55 --format json");
  REQUIRE(r.status == 0);
  doc = json::parse(r.out);
  CHECK(doc["below"]["exact"] == false);
  CHECK(doc["below"]["lower"] == 2);
  CHECK(doc["below"]["upper"] == 3);

  r = run("count " + path("lat.cllh") + " --threshold 1.55");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("bounds [2, 3]") != std::string::npos);

  r = run("count " + path("lat.cllh") + " --threshold abc");
  CHECK(r.status == 1);
  check_error_line(r, "usage");
  r = run("count " + path("lat.cllh") + " --threshold nan");
  CHECK(r.status == 1);
}

TEST_CASE("eval command") {
  const std::string args = "eval --dataset uniform --seed 4 --batches 100 --runs 1 --format json";
  result r = run(args);
  REQUIRE(r.status == 0);
  json first = json::parse(r.out);
  CHECK(first["dataset"] == "uniform");
  CHECK(first["samples"] == 10000);
  CHECK(first["bin_count"] == 90);
  REQUIRE(first["quantiles"].size() == 12);
  for (const auto& row : first["quantiles"]) CHECK(row["relative_error_pct"].get<double>() <= 10.0);

  r = run(args);
  json second = json::parse(r.out);
  first.erase("timings_us");
  second.erase("timings_us");
  CHECK(first == second);

  r = run("eval --dataset uniform --batches 100 --max-samples 10");
  CHECK(r.status == 2);
  check_error_line(r, "data");
  CHECK(r.err.find("10") != std::string::npos);

  REQUIRE(run("gen --seed 2 --batches 5 --out " + path("eval_raw")).status == 0);
  r = run("eval" + joined(batch_files("eval_raw")) + " --runs 1 --quantiles 0.5");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("files") != std::string::npos);

  r = run("eval --dataset weird");
  CHECK(r.status == 1);
  check_error_line(r, "usage");
}
