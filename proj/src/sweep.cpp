#include "manet/sweep.hpp"

#include "manet/simulation.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace manet {

namespace {

const char* kMetricNames[] = {"pdf", "delay", "throughput"};

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    std::vector<CellResult> cells;
    for (Protocol p : spec.protocols) {
        for (auto [nodes, conns] : spec.sizes) {
            for (double pause : spec.pauses) {
                for (std::uint64_t seed : spec.seeds) {
                    CellResult c;
                    c.protocol = p;
                    c.n_nodes = nodes;
                    c.max_conn = conns;
                    c.pause = pause;
                    c.seed = seed;
                    cells.push_back(c);
                }
            }
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            CellResult& c = cells[i];
            try {
                ScenarioConfig cfg = spec.base;
                cfg.protocol = c.protocol;
                cfg.n_nodes = c.n_nodes;
                cfg.max_conn = c.max_conn;
                cfg.pause = c.pause;
                cfg.seed = c.seed;
                Simulation sim(cfg);
                c.metrics = sim.run();
                c.ok = true;
            } catch (const std::exception& e) {
                c.ok = false;
                c.error = e.what();
            }
        }
    };

    unsigned jobs = spec.jobs ? spec.jobs : std::thread::hardware_concurrency();
    if (jobs <= 1 || cells.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SweepResult r;
    r.all_ok = true;
    for (const auto& c : cells) {
        if (!c.ok) r.all_ok = false;
        r.invariant_violations += c.metrics.invariant_violations;
    }
    r.cells = std::move(cells);
    return r;
}

TrendData trend_data(const SweepSpec& spec, const SweepResult& result) {
    (void)spec;
    // (n_nodes, pause, protocol) -> per-seed values
    std::map<std::tuple<std::uint32_t, double, Protocol>, std::vector<double>>
        pdfs, delays, thrus;
    for (const auto& c : result.cells) {
        if (!c.ok) continue;
        auto key = std::make_tuple(c.n_nodes, c.pause, c.protocol);
        pdfs[key].push_back(c.metrics.pdf);
        if (c.metrics.avg_delay) delays[key].push_back(*c.metrics.avg_delay);
        thrus[key].push_back(c.metrics.throughput_kbps);
    }
    TrendData out;
    auto fill = [&out](const char* metric, const auto& by_key) {
        for (const auto& [key, values] : by_key) {
            auto [nodes, pause, proto] = key;
            out[metric][nodes][pause][proto] = aggregate(values);
        }
    };
    fill("pdf", pdfs);
    fill("delay", delays);
    fill("throughput", thrus);
    return out;
}

std::map<std::string, std::string> render_csvs(const TrendData& data) {
    std::map<std::string, std::string> files;
    for (const char* metric : kMetricNames) {
        auto mit = data.find(metric);
        if (mit == data.end()) continue;
        for (const auto& [nodes, by_pause] : mit->second) {
            std::ostringstream os;
            os << "pause,aodv_mean,aodv_std,dsr_mean,dsr_std,dsdv_mean,"
                  "dsdv_std\n";
            for (const auto& [pause, by_proto] : by_pause) {
                os << fmt(pause);
                for (Protocol p :
                     {Protocol::Aodv, Protocol::Dsr, Protocol::Dsdv}) {
                    auto it = by_proto.find(p);
                    if (it == by_proto.end()) {
                        os << ",nan,nan";
                    } else {
                        os << ',' << fmt(it->second.mean) << ','
                           << fmt(it->second.stddev);
                    }
                }
                os << '\n';
            }
            files[std::string(metric) + "_" + std::to_string(nodes) + ".csv"] =
                os.str();
        }
    }
    return files;
}

TrendData trend_data_from_csv_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::regex name_re(R"((pdf|delay|throughput)_(\d+)\.csv)");
    TrendData out;
    if (!fs::is_directory(dir)) {
        throw std::runtime_error("check: not a directory: " + dir);
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::smatch m;
        std::string name = entry.path().filename().string();
        if (!std::regex_match(name, m, name_re)) continue;
        std::string metric = m[1];
        std::uint32_t nodes = static_cast<std::uint32_t>(std::stoul(m[2]));
        std::ifstream in(entry.path());
        std::string line;
        std::getline(in, line); // header
        int line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double pause;
            double v[6];
            if (!(ls >> pause >> v[0] >> v[1] >> v[2] >> v[3] >> v[4] >>
                  v[5])) {
                std::ostringstream os;
                os << "check: " << name << " line " << line_no
                   << ": malformed row";
                throw std::runtime_error(os.str());
            }
            Protocol protos[] = {Protocol::Aodv, Protocol::Dsr,
                                 Protocol::Dsdv};
            for (int i = 0; i < 3; ++i) {
                if (std::isnan(v[2 * i])) continue;
                Aggregate a;
                a.mean = v[2 * i];
                a.stddev = v[2 * i + 1];
                out[metric][nodes][pause][protos[i]] = a;
            }
        }
    }
    return out;
}

namespace {

// Mean of a protocol's cell means over every (size, pause) cell present.
double sweep_mean(const TrendData& data, const std::string& metric,
                  Protocol p) {
    double sum = 0.0;
    std::size_t n = 0;
    auto mit = data.find(metric);
    if (mit == data.end()) return std::nan("");
    for (const auto& [nodes, by_pause] : mit->second) {
        for (const auto& [pause, by_proto] : by_pause) {
            auto it = by_proto.find(p);
            if (it == by_proto.end()) continue;
            sum += it->second.mean;
            ++n;
        }
    }
    return n ? sum / static_cast<double>(n) : std::nan("");
}

double size_mean(const TrendData& data, const std::string& metric, Protocol p,
                 std::uint32_t nodes) {
    double sum = 0.0;
    std::size_t n = 0;
    auto mit = data.find(metric);
    if (mit == data.end()) return std::nan("");
    auto nit = mit->second.find(nodes);
    if (nit == mit->second.end()) return std::nan("");
    for (const auto& [pause, by_proto] : nit->second) {
        auto it = by_proto.find(p);
        if (it == by_proto.end()) continue;
        sum += it->second.mean;
        ++n;
    }
    return n ? sum / static_cast<double>(n) : std::nan("");
}

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

std::vector<TrendCheck> check_trends(const TrendData& data) {
    std::vector<TrendCheck> out;

    // Delivery level: AODV and DSR each deliver >= 90% averaged per size
    // (>= 85% tolerated with a warning).
    {
        TrendCheck c;
        c.name = "pdf-level";
        c.pass = true;
        std::ostringstream detail;
        auto mit = data.find("pdf");
        if (mit == data.end() || mit->second.empty()) {
            c.pass = false;
            c.detail = "no pdf data";
        } else {
            for (const auto& [nodes, by_pause] : mit->second) {
                for (Protocol p : {Protocol::Aodv, Protocol::Dsr}) {
                    double m = size_mean(data, "pdf", p, nodes);
                    detail << to_string(p) << "@" << nodes << "="
                           << fmt3(m) << " ";
                    if (std::isnan(m) || m < 0.85) {
                        c.pass = false;
                    } else if (m < 0.90) {
                        c.warn = true;
                    }
                }
            }
            c.detail = detail.str();
        }
        out.push_back(std::move(c));
    }

    // Delivery ordering: reactive protocols beat DSDV in >= 80% of
    // (size, pause) cells.
    {
        TrendCheck c;
        c.name = "pdf-ordering";
        std::size_t cells = 0, good = 0;
        auto mit = data.find("pdf");
        if (mit != data.end()) {
            for (const auto& [nodes, by_pause] : mit->second) {
                for (const auto& [pause, by_proto] : by_pause) {
                    auto a = by_proto.find(Protocol::Aodv);
                    auto s = by_proto.find(Protocol::Dsr);
                    auto d = by_proto.find(Protocol::Dsdv);
                    if (a == by_proto.end() || s == by_proto.end() ||
                        d == by_proto.end())
                        continue;
                    ++cells;
                    if (a->second.mean > d->second.mean &&
                        s->second.mean > d->second.mean)
                        ++good;
                }
            }
        }
        c.pass = cells > 0 && static_cast<double>(good) >=
                                  0.8 * static_cast<double>(cells);
        std::ostringstream detail;
        detail << good << "/" << cells << " cells";
        c.detail = detail.str();
        out.push_back(std::move(c));
    }

    // Delay ordering across the whole sweep: DSDV <= DSR <= AODV.
    {
        TrendCheck c;
        c.name = "delay-ordering";
        double dsdv = sweep_mean(data, "delay", Protocol::Dsdv);
        double dsr = sweep_mean(data, "delay", Protocol::Dsr);
        double aodv = sweep_mean(data, "delay", Protocol::Aodv);
        c.pass = !std::isnan(dsdv) && !std::isnan(dsr) && !std::isnan(aodv) &&
                 dsdv <= dsr && dsr <= aodv;
        c.detail = "dsdv=" + fmt3(dsdv) + " dsr=" + fmt3(dsr) +
                   " aodv=" + fmt3(aodv);
        out.push_back(std::move(c));
    }

    // Throughput parity: AODV and DSR within 10% of each other, both at
    // least DSDV's level.
    {
        TrendCheck c;
        c.name = "throughput-parity";
        double aodv = sweep_mean(data, "throughput", Protocol::Aodv);
        double dsr = sweep_mean(data, "throughput", Protocol::Dsr);
        double dsdv = sweep_mean(data, "throughput", Protocol::Dsdv);
        double hi = std::max(aodv, dsr);
        c.pass = !std::isnan(aodv) && !std::isnan(dsr) && !std::isnan(dsdv) &&
                 hi > 0 && std::abs(aodv - dsr) <= 0.10 * hi && aodv >= dsdv &&
                 dsr >= dsdv;
        c.detail = "aodv=" + fmt3(aodv) + " dsr=" + fmt3(dsr) +
                   " dsdv=" + fmt3(dsdv);
        out.push_back(std::move(c));
    }

    // Throughput scaling: per protocol, mean throughput grows with network
    // size/load.
    {
        TrendCheck c;
        c.name = "throughput-scaling";
        c.pass = true;
        std::ostringstream detail;
        auto mit = data.find("throughput");
        if (mit == data.end() || mit->second.size() < 2) {
            c.pass = false;
            c.detail = "need at least two network sizes";
        } else {
            for (Protocol p :
                 {Protocol::Aodv, Protocol::Dsr, Protocol::Dsdv}) {
                double prev = -1.0;
                detail << to_string(p) << ":";
                for (const auto& [nodes, by_pause] : mit->second) {
                    double m = size_mean(data, "throughput", p, nodes);
                    detail << " " << fmt3(m);
                    if (std::isnan(m) || m <= prev) c.pass = false;
                    prev = m;
                }
                detail << " ";
            }
            c.detail = detail.str();
        }
        out.push_back(std::move(c));
    }

    return out;
}

std::string trend_report_json(const std::vector<TrendCheck>& checks) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : checks) {
        j.push_back({{"name", c.name},
                     {"pass", c.pass},
                     {"warn", c.warn},
                     {"detail", c.detail}});
    }
    return j.dump(2) + "\n";
}

} // namespace manet
