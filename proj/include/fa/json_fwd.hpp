#ifndef FA_JSON_FWD_HPP
#define FA_JSON_FWD_HPP

// Forward declaration of nlohmann::json so report headers stay light.
#include <nlohmann/json_fwd.hpp>

#endif
