// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "dyto/serialize.hpp"
#include "dyto/synth.hpp"
#include "dyto/tensor_io.hpp"

namespace fs = std::filesystem;
using namespace dyto;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "dyto_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result run(const std::string& args) {
  const auto out = work_dir() / "stdout.txt";
  const auto err = work_dir() / "stderr.txt";
  const std::string cmd = std::string(DYTO_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string path(const std::string& name) { return (work_dir() / name).string(); }

void make_video(const std::string& name, std::size_t frames, std::size_t events, std::size_t tokens,
                std::size_t dim) {
  SyntheticSpec s;
  s.n_frames = frames;
  s.n_events = events;
  s.tokens_per_frame = tokens;
  s.dim = dim;
  s.sigma = 0.0;
  s.seed = 3;
  save_tokens(generate_synthetic_video(s).tokens, path(name));
}

}  // namespace

TEST_CASE("cluster writes a clustering document") {
  make_video("small.dyt", 30, 3, 17, 16);
  const auto r = run("cluster --input " + path("small.dyt") + " --output " + path("clusters.json"));
  CHECK(r.code == 0);
  CHECK(r.out == "3\n");
  const auto doc = read_json(path("clusters.json"));
  CHECK(doc.contains("selected_level"));
  CHECK(doc["keyframes"].size() == 3);
}

TEST_CASE("corrupt input is a format error") {
  make_video("corrupt.dyt", 10, 2, 5, 4);
  {
    std::fstream f(path("corrupt.dyt"), std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  const auto r = run("cluster --input " + path("corrupt.dyt") + " --output " + path("c.json"));
  CHECK(r.code == 2);
  CHECK(r.err.find("format error") != std::string::npos);
}

TEST_CASE("missing input is a storage error") {
  CHECK(run("run --input " + path("nope.dyt") + " --output " + path("nope.out")).code == 2);
}

TEST_CASE("bad arguments are a parse error") {
  CHECK(run("run --input").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("a single frame cannot be clustered") {
  make_video("single.dyt", 1, 1, 5, 4);
  const auto r = run("cluster --input " + path("single.dyt") + " --output " + path("s.json"));
  CHECK(r.code == 3);
  CHECK(r.err.find("need ≥ 2 frames") != std::string::npos);
}

TEST_CASE("run with defaults on a two-event video") {
  make_video("wide.dyt", 12, 2, 1850, 16);
  const auto r = run("run --input " + path("wide.dyt") + " --output " + path("wide.out"));
  REQUIRE(r.code == 0);
  CHECK(r.out == "2 3680\n");
  const auto t = read_tensor_file(path("wide.out"));
  CHECK(t.dims == std::vector<std::uint64_t>{2, 1840, 16});
  const auto sidecar = read_json(path("wide.out.json"));
  CHECK(sidecar["keyframes"].size() == 2);
  CHECK_FALSE(sidecar.contains("traces"));
}

TEST_CASE("budget below the keyframe count is rejected") {
  make_video("small2.dyt", 30, 3, 17, 16);
  const auto r = run("run --input " + path("small2.dyt") + " --output " + path("b.out") + " --budget 1 --heads 4");
  CHECK(r.code == 3);
  CHECK(r.err.find("Z=1") != std::string::npos);
  CHECK_FALSE(fs::exists(path("b.out")));
}

TEST_CASE("trace adds provenance to the sidecar") {
  make_video("small3.dyt", 30, 3, 17, 16);
  const auto r = run("run --input " + path("small3.dyt") + " --output " + path("t.out") +
                     " --budget 24 --heads 4 --trace --sidecar " + path("t.json"));
  REQUIRE(r.code == 0);
  const auto doc = read_json(path("t.json"));
  REQUIRE(doc["traces"].size() == 3);
  CHECK(doc["traces"][0]["provenance"].size() == 8);
}

TEST_CASE("merge accepts keyframes from a clustering document") {
  make_video("small4.dyt", 30, 3, 17, 16);
  REQUIRE(run("cluster --input " + path("small4.dyt") + " --output " + path("k.json")).code == 0);
  const auto r = run("merge --input " + path("small4.dyt") + " --output " + path("m.out") + " --keyframes " +
                     path("k.json") + " --budget 30 --heads 4");
  CHECK(r.code == 0);
  CHECK(r.out == "3 30\n");
}

TEST_CASE("baseline pools sampled frames") {
  make_video("grid.dyt", 20, 2, 17, 16);
  const auto r = run("baseline --input " + path("grid.dyt") + " --output " + path("p.out") +
                     " --frames-to-sample 4 --grid 2");
  CHECK(r.code == 0);
  CHECK(read_tensor_file(path("p.out")).dims == std::vector<std::uint64_t>{4, 4, 16});
}

TEST_CASE("synth is byte-reproducible") {
  const std::string args = " --frames 20 --events 3 --tokens 17 --dim 16 --seed 9";
  REQUIRE(run("synth --output " + path("s1.dyt") + args).code == 0);
  REQUIRE(run("synth --output " + path("s2.dyt") + args).code == 0);
  CHECK(slurp(path("s1.dyt")) == slurp(path("s2.dyt")));
  CHECK(slurp(path("s1.dyt.gt.json")) == slurp(path("s2.dyt.gt.json")));
  CHECK(ground_truth_from_json(read_json(path("s1.dyt.gt.json"))).n_events() == 3);
}

TEST_CASE("synth rejects more events than frames") {
  const auto r = run("synth --output " + path("bad.dyt") + " --events 200 --frames 100");
  CHECK(r.code == 3);
}

TEST_CASE("bench reports both methods and is reproducible") {
  const std::string args = " --runs 2 --frames 30 --tokens 17 --dim 16 --frames-to-sample 4 --grid 2 --no-timing";
  REQUIRE(run("bench --output " + path("r1.json") + " --tensors " + path("t1") + args).code == 0);
  REQUIRE(run("bench --output " + path("r2.json") + " --tensors " + path("t2") + args).code == 0);
  CHECK(slurp(path("r1.json")) == slurp(path("r2.json")));
  const auto doc = read_json(path("r1.json"));
  CHECK(doc["methods"]["dyto"].contains("coverage"));
  CHECK(doc["methods"]["uniform_pool"].contains("coverage"));
  for (const auto& entry : fs::directory_iterator(path("t1"))) {
    CHECK(slurp(entry.path()) == slurp(fs::path(path("t2")) / entry.path().filename()));
  }
}
