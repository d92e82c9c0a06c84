// SPDX-License-Identifier: Apache-2.0
#include "pairgen.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <thread>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace geoforge {

double score_sample(const Instance& instance, const std::string& text,
                    Translator& translator) {
    std::optional<GeoProgram> translated = translator.translate(text);
    if (!translated) return 0.0;
    return score(instance.program, *translated).overall;
}

std::vector<std::pair<int, int>> select_pairs(const std::vector<double>& sorted_scores,
                                              double delta_min) {
    const int n = static_cast<int>(sorted_scores.size());
    std::vector<std::pair<int, int>> pairs;
    int idx_w = 0;             // first winner candidate (best score)
    int idx_l = n / 2;         // first loser candidate (just past the middle)
    while (idx_w < n / 2 && idx_l < n) {
        if (sorted_scores[idx_w] - sorted_scores[idx_l] > delta_min) {
            pairs.emplace_back(idx_w, idx_l);
            ++idx_w;
            ++idx_l;
        } else {
            ++idx_l;
        }
    }
    return pairs;
}

namespace {

std::vector<PreferencePair> pairs_for_instance(const Instance& instance,
                                               Sampler& sampler,
                                               Translator& translator,
                                               int n_samples, double delta_min,
                                               std::uint64_t instance_seed,
                                               std::mutex* sampler_mutex,
                                               std::mutex* translator_mutex) {
    Rng rng(instance_seed);
    std::vector<std::string> texts(n_samples);
    std::vector<double> scores(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        if (sampler_mutex) {
            std::lock_guard lock(*sampler_mutex);
            texts[k] = sampler.sample(instance, rng);
        } else {
            texts[k] = sampler.sample(instance, rng);
        }
        if (translator_mutex) {
            std::lock_guard lock(*translator_mutex);
            scores[k] = score_sample(instance, texts[k], translator);
        } else {
            scores[k] = score_sample(instance, texts[k], translator);
        }
    }
    // descending by score, ties by draw order
    std::vector<int> order(n_samples);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&scores](int a, int b) { return scores[a] > scores[b]; });
    std::vector<double> sorted_scores(n_samples);
    for (int k = 0; k < n_samples; ++k) sorted_scores[k] = scores[order[k]];

    std::vector<PreferencePair> out;
    for (auto [w, l] : select_pairs(sorted_scores, delta_min)) {
        PreferencePair pair;
        pair.id = instance.id;
        pair.winner = texts[order[w]];
        pair.loser = texts[order[l]];
        pair.s_w = sorted_scores[w];
        pair.s_l = sorted_scores[l];
        out.push_back(std::move(pair));
    }
    return out;
}

}  // namespace

std::vector<PreferencePair> generate_pairs(const std::vector<Instance>& corpus,
                                           Sampler& sampler, Translator& translator,
                                           int n_samples, double delta_min,
                                           std::uint64_t seed, int jobs) {
    if (n_samples < 2) throw std::invalid_argument("n_samples must be >= 2");
    std::vector<std::vector<PreferencePair>> per_instance(corpus.size());

    std::mutex sampler_mutex, translator_mutex;
    const bool parallel = jobs > 1 && corpus.size() > 1;
    std::mutex* smx = parallel && !sampler.thread_safe() ? &sampler_mutex : nullptr;
    std::mutex* tmx =
        parallel && !translator.thread_safe() ? &translator_mutex : nullptr;

    auto work = [&](size_t i) {
        per_instance[i] = pairs_for_instance(
            corpus[i], sampler, translator, n_samples, delta_min,
            derive_seed(seed, {static_cast<std::uint64_t>(i)}), smx, tmx);
    };
    if (!parallel) {
        for (size_t i = 0; i < corpus.size(); ++i) work(i);
    } else {
        std::atomic<size_t> cursor{0};
        std::vector<std::thread> workers;
        for (int t = 0; t < jobs; ++t)
            workers.emplace_back([&] {
                for (size_t i = cursor.fetch_add(1); i < corpus.size();
                     i = cursor.fetch_add(1))
                    work(i);
            });
        for (auto& t : workers) t.join();
    }

    std::vector<PreferencePair> out;
    for (auto& pairs : per_instance)
        for (auto& pair : pairs) out.push_back(std::move(pair));
    return out;
}

// ---------------------------------------------------------------------------
// Stubs

namespace {

enum class Corruption { RelabelPoint, DropLine, FlipConstraint };

std::vector<Corruption> applicable_corruptions(const GeoProgram& p) {
    std::vector<Corruption> out;
    bool has_labeled = false;
    bool label_used[26] = {};
    for (const auto& pt : p.points)
        if (pt.label) {
            has_labeled = true;
            label_used[*pt.label - 'A'] = true;
        }
    bool has_free_letter = false;
    for (int i = 0; i < 26; ++i)
        if (!label_used[i]) has_free_letter = true;
    if (has_labeled && has_free_letter) out.push_back(Corruption::RelabelPoint);
    if (!p.lines.empty()) out.push_back(Corruption::DropLine);
    for (const auto& r : p.constraints)
        if (r.kind == ConstraintKind::Parallel ||
            r.kind == ConstraintKind::Perpendicular) {
            out.push_back(Corruption::FlipConstraint);
            break;
        }
    return out;
}

void relabel_point(GeoProgram& p, Rng& rng) {
    std::vector<int> labeled;
    bool used[26] = {};
    for (int i = 0; i < static_cast<int>(p.points.size()); ++i)
        if (p.points[i].label) {
            labeled.push_back(i);
            used[*p.points[i].label - 'A'] = true;
        }
    std::vector<char> free_letters;
    for (int i = 0; i < 26; ++i)
        if (!used[i]) free_letters.push_back(static_cast<char>('A' + i));
    int victim = labeled[rng.index(labeled.size())];
    p.points[victim].label = free_letters[rng.index(free_letters.size())];
}

void drop_line(GeoProgram& p, Rng& rng) {
    int victim = static_cast<int>(rng.index(p.lines.size()));
    p.lines.erase(p.lines.begin() + victim);
    std::vector<ConstraintDecl> kept;
    for (ConstraintDecl r : p.constraints) {
        bool uses_lines = r.kind == ConstraintKind::Parallel ||
                          r.kind == ConstraintKind::Perpendicular ||
                          r.kind == ConstraintKind::LineCircleTangent;
        if (uses_lines) {
            int line_args = r.kind == ConstraintKind::LineCircleTangent ? 1 : 2;
            bool dangling = false;
            for (int s = 0; s < line_args; ++s) {
                if (r.curves[s] == victim) dangling = true;
                if (r.curves[s] > victim) --r.curves[s];
            }
            if (dangling) continue;
        }
        kept.push_back(r);
    }
    p.constraints = std::move(kept);
}

void flip_constraint(GeoProgram& p, Rng& rng) {
    std::vector<int> flippable;
    for (int i = 0; i < static_cast<int>(p.constraints.size()); ++i)
        if (p.constraints[i].kind == ConstraintKind::Parallel ||
            p.constraints[i].kind == ConstraintKind::Perpendicular)
            flippable.push_back(i);
    int victim = flippable[rng.index(flippable.size())];
    auto& kind = p.constraints[victim].kind;
    kind = kind == ConstraintKind::Parallel ? ConstraintKind::Perpendicular
                                            : ConstraintKind::Parallel;
}

}  // namespace

std::string degrade_program(const GeoProgram& truth, int level, Rng& rng) {
    GeoProgram p = truth;
    for (int step = 0; step < level; ++step) {
        auto options = applicable_corruptions(p);
        if (options.empty()) break;
        switch (options[rng.index(options.size())]) {
            case Corruption::RelabelPoint: relabel_point(p, rng); break;
            case Corruption::DropLine: drop_line(p, rng); break;
            case Corruption::FlipConstraint: flip_constraint(p, rng); break;
        }
    }
    return serialize_program(p);
}

std::string StubSampler::sample(const Instance& instance, Rng& rng) {
    return degrade_program(instance.program, degradation_level_, rng);
}

std::optional<GeoProgram> ParserTranslator::translate(const std::string& text) {
    try {
        GeoProgram p = parse_program(text);
        if (has_errors(validate(p))) return std::nullopt;
        return p;
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Process adapters

class Subprocess {
public:
    explicit Subprocess(const std::string& command) {
        int to_child[2], from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0)
            throw IOError("pipe() failed");
        pid_ = fork();
        if (pid_ < 0) throw IOError("fork() failed");
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        in_fd_ = to_child[1];
        out_fd_ = from_child[0];
    }

    ~Subprocess() {
        if (in_fd_ >= 0) close(in_fd_);
        if (out_fd_ >= 0) close(out_fd_);
        if (pid_ > 0) {
            int status = 0;
            waitpid(pid_, &status, 0);
        }
    }

    // One request line out, one response line back.
    std::string round_trip(const std::string& line) {
        std::string payload = line + "\n";
        const char* data = payload.data();
        size_t left = payload.size();
        while (left > 0) {
            ssize_t n = write(in_fd_, data, left);
            if (n <= 0) throw IOError("subprocess stdin closed");
            data += n;
            left -= static_cast<size_t>(n);
        }
        std::string response;
        char ch;
        while (true) {
            ssize_t n = read(out_fd_, &ch, 1);
            if (n <= 0) throw IOError("subprocess stdout closed");
            if (ch == '\n') break;
            response.push_back(ch);
        }
        return response;
    }

private:
    pid_t pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
};

ProcessSampler::ProcessSampler(const std::string& command)
    : proc_(std::make_unique<Subprocess>(command)) {}
ProcessSampler::~ProcessSampler() = default;

std::string ProcessSampler::sample(const Instance& instance, Rng& rng) {
    (void)rng;  // the external process owns its stochasticity
    nlohmann::ordered_json req;
    req["id"] = instance.id;
    req["iteration"] = instance.iteration;
    req["program"] = instance.program_text;
    nlohmann::json res = nlohmann::json::parse(proc_->round_trip(req.dump()));
    return res.at("text").get<std::string>();
}

ProcessTranslator::ProcessTranslator(const std::string& command)
    : proc_(std::make_unique<Subprocess>(command)) {}
ProcessTranslator::~ProcessTranslator() = default;

std::optional<GeoProgram> ProcessTranslator::translate(const std::string& text) {
    nlohmann::ordered_json req;
    req["text"] = text;
    nlohmann::json res = nlohmann::json::parse(proc_->round_trip(req.dump()));
    if (res.contains("error") || !res.contains("program")) return std::nullopt;
    try {
        return parse_program(res.at("program").get<std::string>());
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

std::string pairs_to_jsonl(const std::vector<PreferencePair>& pairs) {
    std::string out;
    for (const auto& pair : pairs) {
        nlohmann::ordered_json j;
        j["id"] = pair.id;
        j["winner"] = pair.winner;
        j["loser"] = pair.loser;
        j["s_w"] = pair.s_w;
        j["s_l"] = pair.s_l;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace geoforge
