//! Long-form guide. Chapters are included from `book/src` and their code
//! blocks run as doc-tests, keeping the book in sync with the library.
