#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ni {

/// Frequency-response evaluation requested too close to an imaginary-axis pole.
class NearPoleError : public std::runtime_error {
  public:
    NearPoleError(double omega, double pole_omega)
        : std::runtime_error("evaluation at omega=" + std::to_string(omega) +
                             " is within the exclusion band of a pole at omega=" +
                             std::to_string(pole_omega)),
          omega_(omega),
          pole_omega_(pole_omega) {}

    double omega() const { return omega_; }
    double pole_omega() const { return pole_omega_; }

  private:
    double omega_;
    double pole_omega_;
};

/// Structured-text parse failure with a line diagnostic.
class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string& what_arg)
        : std::runtime_error("line " + std::to_string(line) + ": " + what_arg), line_(line) {}

    int line() const { return line_; }

  private:
    int line_;
};

/// One or more named preconditions failed; `failed()` lists them.
class PreconditionError : public std::runtime_error {
  public:
    explicit PreconditionError(std::vector<std::string> failed)
        : std::runtime_error(join(failed)), failed_(std::move(failed)) {}

    const std::vector<std::string>& failed() const { return failed_; }

  private:
    static std::string join(const std::vector<std::string>& xs) {
        std::string s = "precondition failure:";
        for (const auto& x : xs) s += " " + x;
        return s;
    }

    std::vector<std::string> failed_;
};

}  // namespace ni
