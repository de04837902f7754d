// Wire types for the studio service API.
export {};
