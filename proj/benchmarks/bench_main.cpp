#include <memory>

#include <benchmark/benchmark.h>

#include "exbound/approx.hpp"
#include "exbound/assembly.hpp"
#include "exbound/bounds_conforming.hpp"
#include "exbound/mesh.hpp"

using namespace exbound;

namespace {

std::shared_ptr<const TetMesh> ball_mesh(int n) {
  return std::make_shared<const TetMesh>(generate_ball_octant_shell(5.0, n, n));
}

void BM_GenerateBall(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_ball_octant_shell(5.0, n, n));
  state.SetLabel(std::to_string(ball_octant_tet_count(n, n)) + " tets");
}
BENCHMARK(BM_GenerateBall)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_AssembleStiffnessP2(benchmark::State& state) {
  auto mesh = ball_mesh(static_cast<int>(state.range(0)));
  const FeSpace space(mesh, 2, 1);
  const std::vector<Mat3> a(mesh->num_tets(), Mat3::Identity());
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(space, a));
}
BENCHMARK(BM_AssembleStiffnessP2)->Arg(8)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_AlternatingSolve(benchmark::State& state) {
  auto mesh = ball_mesh(static_cast<int>(state.range(0)));
  auto space = std::make_shared<const FeSpace>(mesh, 1, 1);
  const ProblemSpec problem = ProblemSpec::laplace(*mesh, 5.0, Obstacle::Ball);
  for (auto _ : state) benchmark::DoNotOptimize(alg1_run(space, problem));
}
BENCHMARK(BM_AlternatingSolve)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Majorant(benchmark::State& state) {
  auto mesh = ball_mesh(static_cast<int>(state.range(0)));
  auto space = std::make_shared<const FeSpace>(mesh, 1, 1);
  const ProblemSpec problem = ProblemSpec::laplace(*mesh, 5.0, Obstacle::Ball);
  const Alg1Result alg1 = alg1_run(space, problem);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_majorant(alg1.approx, problem));
}
BENCHMARK(BM_Majorant)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Minorant(benchmark::State& state) {
  auto mesh = ball_mesh(static_cast<int>(state.range(0)));
  auto space = std::make_shared<const FeSpace>(mesh, 1, 1);
  const ProblemSpec problem = ProblemSpec::laplace(*mesh, 5.0, Obstacle::Ball);
  const Alg1Result alg1 = alg1_run(space, problem);
  for (auto _ : state) benchmark::DoNotOptimize(maximize_minorant(alg1.approx, problem));
}
BENCHMARK(BM_Minorant)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
