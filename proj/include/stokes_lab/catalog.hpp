#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace stokes_lab::scenarios {

/// A scenario file compiled into the binary.
struct CatalogEntry {
  const char* name;
  const char* body;
};

/// Bundled scenarios in catalog order.
std::span<const CatalogEntry> bundled_catalog();

std::optional<CatalogEntry> find_catalog_entry(std::string_view name);

}  // namespace stokes_lab::scenarios
