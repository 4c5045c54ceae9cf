#include "paircredit/errors.hpp"

namespace paircredit::detail {

void throw_domain(const std::string& what) { throw DomainError(what); }

}  // namespace paircredit::detail
