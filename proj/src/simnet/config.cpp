// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/simnet/config.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace chainlab::simnet {

namespace {

constexpr char kHeader[] = "chainlab v1 sha256";

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

int64_t parse_int(const std::string& field, const std::string& tok) {
    size_t pos = 0;
    int64_t v = 0;
    try {
        v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        throw InvalidConfigError(field, "not an integer: '" + tok + "'");
    }
    if (pos != tok.size())
        throw InvalidConfigError(field, "trailing junk in '" + tok + "'");
    return v;
}

uint64_t parse_uint(const std::string& field, const std::string& tok) {
    if (!tok.empty() && tok[0] == '-')
        throw InvalidConfigError(field, "must be non-negative");
    size_t pos = 0;
    uint64_t v = 0;
    try {
        v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
        throw InvalidConfigError(field, "not an integer: '" + tok + "'");
    }
    if (pos != tok.size())
        throw InvalidConfigError(field, "trailing junk in '" + tok + "'");
    return v;
}

double parse_double(const std::string& field, const std::string& tok) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw InvalidConfigError(field, "not a number: '" + tok + "'");
    }
    if (pos != tok.size())
        throw InvalidConfigError(field, "trailing junk in '" + tok + "'");
    return v;
}

SimTime parse_time(const std::string& field, const std::string& tok) {
    try {
        return parse_seconds(tok);
    } catch (const std::invalid_argument& e) {
        throw InvalidConfigError(field, e.what());
    }
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string format_seconds(SimTime t) {
    const bool neg = t < 0;
    uint64_t abs = neg ? uint64_t(-(t + 1)) + 1 : uint64_t(t);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s%llu.%06llu", neg ? "-" : "",
                  (unsigned long long)(abs / kMicrosPerSecond),
                  (unsigned long long)(abs % kMicrosPerSecond));
    return buf;
}

SimTime parse_seconds(const std::string& text) {
    if (text.empty())
        throw std::invalid_argument("empty time value");
    size_t i = 0;
    uint64_t whole = 0;
    bool any = false;
    for (; i < text.size() && text[i] != '.'; ++i) {
        if (text[i] < '0' || text[i] > '9')
            throw std::invalid_argument("bad time value '" + text + "'");
        whole = whole * 10 + uint64_t(text[i] - '0');
        if (whole > uint64_t(INT64_MAX / kMicrosPerSecond))
            throw std::invalid_argument("time value out of range");
        any = true;
    }
    uint64_t frac = 0;
    if (i < text.size()) { // fractional part
        ++i;
        int digits = 0;
        for (; i < text.size(); ++i, ++digits) {
            if (text[i] < '0' || text[i] > '9' || digits >= 6)
                throw std::invalid_argument("bad time value '" + text +
                                            "' (at most 6 fractional digits)");
            frac = frac * 10 + uint64_t(text[i] - '0');
            any = true;
        }
        while (digits++ < 6)
            frac *= 10;
    }
    if (!any)
        throw std::invalid_argument("bad time value '" + text + "'");
    return SimTime(whole * uint64_t(kMicrosPerSecond) + frac);
}

std::vector<double> SimConfig::effective_shares() const {
    if (!hash_shares.empty())
        return hash_shares;
    return std::vector<double>(size_t(node_count), 1.0 / double(node_count));
}

void SimConfig::validate() const {
    if (node_count < 1)
        throw InvalidConfigError("nodes", "need at least one node");
    if (!hash_shares.empty()) {
        if (hash_shares.size() != size_t(node_count))
            throw InvalidConfigError("shares", "expected one share per node");
        double sum = 0;
        for (double s : hash_shares) {
            if (s < 0)
                throw InvalidConfigError("shares", "shares must be non-negative");
            sum += s;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw InvalidConfigError("shares", "shares must sum to 1, got " + fmt_double(sum));
    }
    if (mean_block_interval <= 0)
        throw InvalidConfigError("mean_block_interval", "must be positive");
    if (latency.kind == LatencyModel::Kind::Fixed) {
        if (latency.fixed < 0)
            throw InvalidConfigError("latency", "fixed latency must be non-negative");
    } else {
        if (latency.min < 0 || latency.max < latency.min)
            throw InvalidConfigError("latency", "need 0 <= min <= max");
    }
    for (const auto& p : partitions) {
        if (p.start < 0 || p.end <= p.start)
            throw InvalidConfigError("partition", "need 0 <= start < end");
        if (p.side_a.empty() || p.side_b.empty())
            throw InvalidConfigError("partition", "both sides must be non-empty");
        std::set<int> seen;
        for (int n : p.side_a) {
            if (n < 0 || n >= node_count)
                throw InvalidConfigError("partition", "node id out of range");
            seen.insert(n);
        }
        for (int n : p.side_b) {
            if (n < 0 || n >= node_count)
                throw InvalidConfigError("partition", "node id out of range");
            if (seen.count(n))
                throw InvalidConfigError("partition", "node " + std::to_string(n) + " on both sides");
        }
    }
    if (block_reward < 1)
        throw InvalidConfigError("block_reward", "must be at least 1");
    if (difficulty_bits > 40)
        throw InvalidConfigError("difficulty_bits", "above 40 is not searchable at desk scale");
    if (duration <= 0)
        throw InvalidConfigError("duration", "must be positive");
    for (size_t i = 0; i < workload.size(); ++i) {
        const auto& w = workload[i];
        const std::string field = "tx[" + std::to_string(i) + "]";
        if (w.from_node < 0 || w.from_node >= node_count || w.to_node < 0 ||
            w.to_node >= node_count)
            throw InvalidConfigError(field, "node id out of range");
        if (w.amount < 1)
            throw InvalidConfigError(field, "amount must be at least 1");
        if (w.fee < 0)
            throw InvalidConfigError(field, "fee must be non-negative");
        if (w.time < 0 || w.time > duration)
            throw InvalidConfigError(field, "submission time outside [0, duration]");
    }
    if (attack.enabled) {
        if (attack.attacker_node < 0 || attack.attacker_node >= node_count)
            throw InvalidConfigError("attacker", "node id out of range");
        if (attack.target_tx < 0 || size_t(attack.target_tx) >= workload.size())
            throw InvalidConfigError("attacker", "target tx index out of range");
    }
    if (max_txs_per_block < 1)
        throw InvalidConfigError("max_txs_per_block", "must be at least 1");
    if (mine_workers < 1)
        throw InvalidConfigError("mine_workers", "must be at least 1");
}

std::string SimConfig::canonical_text() const {
    std::ostringstream os;
    os << kHeader << "\n";
    os << "seed = " << seed << "\n";
    os << "nodes = " << node_count << "\n";
    os << "shares =";
    for (double s : effective_shares())
        os << " " << fmt_double(s);
    os << "\n";
    os << "mean_block_interval = " << format_seconds(mean_block_interval) << "\n";
    if (latency.kind == LatencyModel::Kind::Fixed)
        os << "latency = fixed " << format_seconds(latency.fixed) << "\n";
    else
        os << "latency = uniform " << format_seconds(latency.min) << " "
           << format_seconds(latency.max) << "\n";
    for (const auto& p : partitions) {
        os << "partition = " << format_seconds(p.start) << " " << format_seconds(p.end) << " :";
        for (int n : p.side_a)
            os << " " << n;
        os << " |";
        for (int n : p.side_b)
            os << " " << n;
        os << "\n";
    }
    os << "block_reward = " << block_reward << "\n";
    os << "difficulty_bits = " << difficulty_bits << "\n";
    os << "mining_mode = " << (mining_mode == MiningMode::Poisson ? "poisson" : "real_pow")
       << "\n";
    // mine_workers is an execution knob, not scenario semantics: reports must
    // be identical across worker counts, so it stays out of the digest.
    os << "duration = " << format_seconds(duration) << "\n";
    os << "max_txs_per_block = " << max_txs_per_block << "\n";
    for (const auto& w : workload) {
        os << "tx = " << format_seconds(w.time) << " " << w.from_node << " " << w.to_node << " "
           << w.amount;
        if (w.fee != 0)
            os << " " << w.fee;
        os << "\n";
    }
    if (attack.enabled)
        os << "attacker = " << attack.attacker_node << " " << attack.target_tx << "\n";
    return os.str();
}

SimConfig SimConfig::parse(const std::string& text) {
    SimConfig cfg;
    std::istringstream is(text);
    std::string line;
    bool header_seen = false;
    bool duration_seen = false;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (!header_seen) {
            if (line != kHeader)
                throw InvalidConfigError("header", "first line must be '" + std::string(kHeader) +
                                                       "', got '" + line + "'");
            header_seen = true;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto toks = split_ws(value);

        if (key == "seed") {
            cfg.seed = parse_uint(key, value);
        } else if (key == "nodes") {
            cfg.node_count = int(parse_int(key, value));
        } else if (key == "shares") {
            cfg.hash_shares.clear();
            for (const auto& t : toks)
                cfg.hash_shares.push_back(parse_double(key, t));
        } else if (key == "mean_block_interval") {
            cfg.mean_block_interval = parse_time(key, value);
        } else if (key == "latency") {
            if (toks.size() == 2 && toks[0] == "fixed") {
                cfg.latency.kind = LatencyModel::Kind::Fixed;
                cfg.latency.fixed = parse_time(key, toks[1]);
            } else if (toks.size() == 3 && toks[0] == "uniform") {
                cfg.latency.kind = LatencyModel::Kind::Uniform;
                cfg.latency.min = parse_time(key, toks[1]);
                cfg.latency.max = parse_time(key, toks[2]);
            } else {
                throw InvalidConfigError(key, "expected 'fixed T' or 'uniform MIN MAX'");
            }
        } else if (key == "partition") {
            Partition p;
            size_t i = 0;
            if (toks.size() < 5)
                throw InvalidConfigError(key, "expected 'START END : A... | B...'");
            p.start = parse_time(key, toks[i++]);
            p.end = parse_time(key, toks[i++]);
            if (toks[i++] != ":")
                throw InvalidConfigError(key, "expected ':' after times");
            bool in_b = false;
            for (; i < toks.size(); ++i) {
                if (toks[i] == "|") {
                    in_b = true;
                    continue;
                }
                (in_b ? p.side_b : p.side_a).push_back(int(parse_int(key, toks[i])));
            }
            if (!in_b)
                throw InvalidConfigError(key, "missing '|' separating the two sides");
            cfg.partitions.push_back(std::move(p));
        } else if (key == "block_reward") {
            cfg.block_reward = parse_int(key, value);
        } else if (key == "difficulty_bits") {
            cfg.difficulty_bits = uint32_t(parse_uint(key, value));
        } else if (key == "mining_mode") {
            if (value == "poisson")
                cfg.mining_mode = MiningMode::Poisson;
            else if (value == "real_pow")
                cfg.mining_mode = MiningMode::RealPow;
            else
                throw InvalidConfigError(key, "expected 'poisson' or 'real_pow'");
        } else if (key == "duration") {
            cfg.duration = parse_time(key, value);
            duration_seen = true;
        } else if (key == "max_txs_per_block") {
            cfg.max_txs_per_block = size_t(parse_uint(key, value));
        } else if (key == "mine_workers") {
            cfg.mine_workers = unsigned(parse_uint(key, value));
        } else if (key == "tx") {
            if (toks.size() != 4 && toks.size() != 5)
                throw InvalidConfigError(key, "expected 'TIME FROM TO AMOUNT [FEE]'");
            WorkloadTx w;
            w.time = parse_time(key, toks[0]);
            w.from_node = int(parse_int(key, toks[1]));
            w.to_node = int(parse_int(key, toks[2]));
            w.amount = parse_int(key, toks[3]);
            if (toks.size() == 5)
                w.fee = parse_int(key, toks[4]);
            cfg.workload.push_back(w);
        } else if (key == "attacker") {
            if (toks.size() != 2)
                throw InvalidConfigError(key, "expected 'NODE TARGET_TX_INDEX'");
            cfg.attack.enabled = true;
            cfg.attack.attacker_node = int(parse_int(key, toks[0]));
            cfg.attack.target_tx = int(parse_int(key, toks[1]));
        } else {
            throw InvalidConfigError(key, "unknown key");
        }
    }
    if (!header_seen)
        throw InvalidConfigError("header", "empty config");
    if (!duration_seen)
        throw InvalidConfigError("duration", "missing");
    cfg.validate();
    return cfg;
}

SimConfig SimConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidConfigError("file", "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

} // namespace chainlab::simnet
