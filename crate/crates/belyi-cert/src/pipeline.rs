// Pipeline orchestration (in progress).
