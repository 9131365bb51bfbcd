#include "ni/modal.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ni/errors.hpp"

namespace ni {

namespace {

void validate_mode(const Mode& m, size_t index) {
    const std::string where = "mode " + std::to_string(index + 1) + ": ";
    if (!(m.gain > 0.0)) throw std::invalid_argument(where + "gain must be > 0");
    if (!(m.delta > 0.0)) throw std::invalid_argument(where + "delta must be > 0");
    if (!(m.damping >= 0.0)) throw std::invalid_argument(where + "damping must be >= 0");
    if (!(m.zeta() < 1.0))
        throw std::invalid_argument(where + "damping ratio must be < 1 (lightly damped)");
}

}  // namespace

RationalFunction Mode::tf() const {
    return {Polynomial({gain}), Polynomial({1.0, damping, delta})};
}

ModalModel::ModalModel(std::vector<Mode> modes, std::string name, bool sort_by_frequency)
    : modes_(std::move(modes)), name_(std::move(name)) {
    if (modes_.empty()) throw std::invalid_argument("modal model must contain at least one mode");
    for (size_t i = 0; i < modes_.size(); ++i) validate_mode(modes_[i], i);
    if (sort_by_frequency)
        std::stable_sort(modes_.begin(), modes_.end(),
                         [](const Mode& a, const Mode& b) { return a.delta < b.delta; });
}

bool ModalModel::is_undamped() const {
    return std::all_of(modes_.begin(), modes_.end(),
                       [](const Mode& m) { return m.damping == 0.0; });
}

RationalFunction modal_tf(const ModalModel& model) {
    Polynomial den = Polynomial::constant(1.0);
    for (const Mode& m : model.modes()) den = den * Polynomial({1.0, m.damping, m.delta});

    Polynomial num;
    for (size_t i = 0; i < model.size(); ++i) {
        Polynomial term = Polynomial::constant(model.mode(i).gain);
        for (size_t j = 0; j < model.size(); ++j) {
            if (j == i) continue;
            const Mode& m = model.mode(j);
            term = term * Polynomial({1.0, m.damping, m.delta});
        }
        num = num + term;
    }
    return RationalFunction(std::move(num), std::move(den)).reduce();
}

std::pair<ModalModel, ModalModel> split_additive(const ModalModel& model, size_t m) {
    if (m < 1 || m >= model.size())
        throw std::invalid_argument("split point must satisfy 1 <= m < mode count");
    std::vector<Mode> head(model.modes().begin(), model.modes().begin() + static_cast<long>(m));
    std::vector<Mode> tail(model.modes().begin() + static_cast<long>(m), model.modes().end());
    return {ModalModel(std::move(head), model.name(), false),
            ModalModel(std::move(tail), model.name(), false)};
}

RationalFunction multiplicative_delta(const ModalModel& model, size_t m) {
    if (m < 1 || m > model.size())
        throw std::invalid_argument("split point must satisfy 1 <= m <= mode count");
    for (size_t i = 0; i < model.size(); ++i) {
        if (model.mode(i).damping != 0.0)
            throw PreconditionError({"undamped_model (mode " + std::to_string(i + 1) +
                                     " has nonzero damping; apply undamp() first)"});
    }
    if (m == model.size()) return RationalFunction();  // no truncated dynamics

    auto [head, tail] = split_additive(model, m);
    return (modal_tf(tail) / modal_tf(head)).reduce();
}

ModalModel undamp(const ModalModel& model) {
    std::vector<Mode> modes = model.modes();
    for (Mode& m : modes) m.damping = 0.0;
    return ModalModel(std::move(modes), model.name(), false);
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& text, int line) {
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "expected a number, got '" + text + "'");
    }
    if (used != text.size()) throw ParseError(line, "trailing characters after number: '" + text + "'");
    return v;
}

}  // namespace

ModalModel load_modal(std::istream& in) {
    struct Pending {
        int line = 0;
        bool has_gain = false, has_damp = false, has_delta = false;
        Mode mode;
    };

    std::string name;
    std::vector<Mode> modes;
    Pending cur;
    bool in_mode = false;

    auto finish = [&](int line) {
        if (!in_mode) return;
        if (!cur.has_gain || !cur.has_damp || !cur.has_delta)
            throw ParseError(cur.line, "mode record is missing a field (needs gamma_gain, "
                                       "gamma_damp, delta); record ends before line " +
                                           std::to_string(line));
        modes.push_back(cur.mode);
        cur = Pending{};
    };

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s == "[[mode]]") {
            finish(line);
            in_mode = true;
            cur.line = line;
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (value.empty()) throw ParseError(line, "missing value for '" + key + "'");

        if (!in_mode) {
            if (key == "name") {
                name = value;
                if (name.size() >= 2 && name.front() == '"' && name.back() == '"')
                    name = name.substr(1, name.size() - 2);
            } else {
                throw ParseError(line, "unknown top-level field '" + key + "'");
            }
            continue;
        }
        if (key == "gamma_gain") {
            cur.mode.gain = parse_number(value, line);
            cur.has_gain = true;
        } else if (key == "gamma_damp") {
            cur.mode.damping = parse_number(value, line);
            cur.has_damp = true;
        } else if (key == "delta") {
            cur.mode.delta = parse_number(value, line);
            cur.has_delta = true;
        } else {
            throw ParseError(line, "unknown mode field '" + key + "'");
        }
    }
    finish(line + 1);
    if (modes.empty()) throw ParseError(line, "no mode records found");
    return ModalModel(std::move(modes), std::move(name));
}

ModalModel load_modal_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open modal file: " + path);
    return load_modal(in);
}

}  // namespace ni
