#include "cropsense/analytics.hpp"
#include "cropsense/incentives.hpp"
#include "cropsense/ingestion.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace cropsense;

namespace {

const Date kMonday = parse_date("2018-04-16");

void BM_ReportPrice(benchmark::State& state) {
    const auto scheme = incentives::preset(static_cast<incentives::SchemeId>(state.range(0)));
    incentives::Ordinal k = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(incentives::report_price(k, scheme));
        k = k % 4000 + 1;
    }
}
BENCHMARK(BM_ReportPrice)->DenseRange(0, 4);

void BM_ComputePayout(benchmark::State& state) {
    const auto n = static_cast<incentives::Ordinal>(state.range(0));
    std::vector<incentives::PricedReport> h;
    for (incentives::Ordinal k = 1; k <= n; ++k) h.push_back({k, std::chrono::sys_seconds{kMonday} + std::chrono::seconds{k}});
    const auto book = incentives::SchemeBook::reference_default();
    const auto period = incentives::week_period(kMonday);
    for (auto _ : state) benchmark::DoNotOptimize(incentives::compute_payout("a", h, period, book));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ComputePayout)->Arg(100)->Arg(2000)->Arg(20000);

registry::Registry make_registry(int n) {
    std::vector<registry::FarmerAgent> agents;
    for (int i = 0; i < n; ++i) {
        registry::FarmerAgent a;
        a.agent_id = "A" + std::to_string(i);
        a.status = registry::AgentStatus::Selected;
        a.device_id = "D" + std::to_string(i);
        agents.push_back(a);
    }
    return registry::Registry(std::move(agents));
}

void BM_Submit(benchmark::State& state) {
    const auto reg = make_registry(175);
    ingestion::ReportStore store(&reg);
    ingestion::Capture c;
    c.latitude = 0.5;
    c.longitude = 32.5;
    c.label = "Disease";
    std::uint64_t i = 0;
    for (auto _ : state) {
        c.image_ref = "img" + std::to_string(i);
        benchmark::DoNotOptimize(store.submit("A" + std::to_string(i % 175), c));
        ++i;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Submit);

void BM_Density(benchmark::State& state) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> lat(-1.0, 4.0), lon(30.0, 35.0);
    std::vector<ingestion::Report> reports(static_cast<std::size_t>(state.range(0)));
    for (auto& r : reports) {
        r.latitude = lat(rng);
        r.longitude = lon(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(analytics::spatial_density(reports));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Density)->Arg(10'000)->Arg(100'000);

}  // namespace

BENCHMARK_MAIN();
