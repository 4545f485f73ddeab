#include "rumor/error.hpp"

#include <sstream>

namespace rumor {

namespace {

std::string join_violations(const std::vector<std::string>& v)
{
    std::ostringstream os;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) os << "; ";
        os << v[k];
    }
    return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations))
{
}

ConfigError::ConfigError(const std::string& field, const std::string& message)
    : ConfigError(std::vector<std::string>{field + ": " + message})
{
}

NumericError::NumericError(const std::string& message, double time)
    : std::runtime_error(message), time_(time)
{
}

RunError::RunError(const std::string& where, const std::exception& cause)
    : std::runtime_error(where + ": " + cause.what())
{
}

}  // namespace rumor
