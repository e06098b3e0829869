#pragma once

#include "synline/error.hpp"
#include "synline/field.hpp"
#include "synline/incidence.hpp"
#include "synline/perm.hpp"
#include "synline/perm_group.hpp"
#include "synline/graph_search.hpp"
#include "synline/collineations.hpp"
#include "synline/synthetic_lines.hpp"
#include "synline/free_completion.hpp"
#include "synline/morphisms.hpp"
#include "synline/ab_rigidity.hpp"
#include "synline/io.hpp"
