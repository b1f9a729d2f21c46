#include "dgbo/errors.hpp"

namespace dgbo {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Grid: return "grid error";
        case ErrorKind::SingularSymbol: return "singular symbol";
        case ErrorKind::Admissibility: return "admissibility error";
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::Region: return "region error";
        case ErrorKind::Hypothesis: return "hypothesis violation";
        case ErrorKind::NotReal: return "not real";
        case ErrorKind::Resolution: return "resolution error";
        case ErrorKind::Config: return "config error";
        case ErrorKind::Instability: return "instability";
        case ErrorKind::Io: return "io error";
    }
    return "error";
}

}  // namespace dgbo
