# Utils module for shared utilities 