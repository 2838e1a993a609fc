#pragma once

#define FOLCYC_VERSION "0.1.0"
