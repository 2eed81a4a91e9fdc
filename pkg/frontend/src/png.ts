/** SVG-to-PNG export via an offscreen canvas.
 *
 * The canvas and image loaders are injectable so the pipeline is testable
 * under jsdom, which has no raster canvas.
 */

export interface RasterDeps {
  createCanvas: (width: number, height: number) => HTMLCanvasElement;
  loadImage: (url: string) => Promise<CanvasImageSource>;
}

const browserDeps: RasterDeps = {
  createCanvas(width, height) {
    const canvas = document.createElement("canvas");
    canvas.width = width;
    canvas.height = height;
    return canvas;
  },
  loadImage(url) {
    return new Promise((resolve, reject) => {
      const img = new Image();
      img.onload = () => resolve(img);
      img.onerror = () => reject(new Error("SVG rasterization failed"));
      img.src = url;
    });
  },
};

function svgSize(svgMarkup: string): { width: number; height: number } {
  const w = /width="(\d+)"/.exec(svgMarkup);
  const h = /height="(\d+)"/.exec(svgMarkup);
  return { width: w ? Number(w[1]) : 640, height: h ? Number(h[1]) : 360 };
}

export async function svgToPngBlob(
  svgMarkup: string,
  scale = 2,
  deps: RasterDeps = browserDeps,
): Promise<Blob> {
  if (!svgMarkup.includes("<svg")) throw new Error("not an SVG document");
  const { width, height } = svgSize(svgMarkup);
  const url = "data:image/svg+xml;charset=utf-8," + encodeURIComponent(svgMarkup);
  const image = await deps.loadImage(url);
  const canvas = deps.createCanvas(width * scale, height * scale);
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("canvas 2d context unavailable");
  ctx.scale(scale, scale);
  ctx.drawImage(image, 0, 0);
  const blob = await new Promise<Blob | null>((resolve) => canvas.toBlob(resolve, "image/png"));
  if (!blob || blob.size === 0) throw new Error("PNG export produced no data");
  return blob;
}

export function downloadBlob(blob: Blob, filename: string): void {
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  link.click();
  URL.revokeObjectURL(url);
}
