#pragma once

#define QEM_VERSION "0.1.0"
