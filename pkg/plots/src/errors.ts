/** Error taxonomy shared by the readers and renderers. */

/** A file (or byte buffer) that does not follow its documented layout. */
export class FormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "FormatError";
  }
}

/** Well-formed input whose values cannot support the requested figure. */
export class DataError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "DataError";
  }
}
