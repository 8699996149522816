#pragma once

#include "revset/corpus.hpp"
#include "revset/error.hpp"
#include "revset/evaluation.hpp"
#include "revset/expert_search.hpp"
#include "revset/manifest.hpp"
#include "revset/set_assignment.hpp"
#include "revset/sweep.hpp"
#include "revset/vectorspace.hpp"
